#pragma once

// Test-only reference computations shared by the unit and acceptance suites.

#include <cmath>
#include <numbers>
#include <random>

#include "mr_isolator/analysis.hpp"
#include "mr_isolator/excitation.hpp"
#include "mr_isolator/integrator.hpp"
#include "mr_isolator/model.hpp"
#include "mr_isolator/simulate.hpp"
#include "mr_isolator/tune.hpp"

namespace mr_isolator::testing {

/// Integrates the open-loop plant with constant actuation, time = k * dt.
inline Vector4<double> IntegratePlant(const PlantParams<double>& plant, const Excitation& excitation,
                                      const IntegratorConfig& cfg, int steps,
                                      Vector4<double> x) {
  auto f = [&](double t, const Vector4<double>& s) {
    const BaseMotion b = excitation.Eval(t);
    return Derivatives(s, b.z0, b.v0, plant, plant.beta2_passive, 0.0);
  };
  for (int k = 0; k < steps; ++k) x = Step<double, 4>(f, k * cfg.dt, x, cfg);
  return x;
}

/// Observed order of RK4 from errors at dt, dt/2, dt/4 against a dt/64
/// reference, all integrated to `horizon`. Returns the smaller of the two
/// successive log2 error ratios.
inline double Rk4SelfConvergenceOrder(const PlantParams<double>& plant,
                                      const Excitation& excitation, double dt, double horizon,
                                      const Vector4<double>& x0) {
  auto solve = [&](int refine) {
    IntegratorConfig cfg{IntegrationMethod::kRk4, dt / refine};
    return IntegratePlant(plant, excitation, cfg,
                          static_cast<int>(std::lround(horizon / dt)) * refine, x0);
  };
  const Vector4<double> reference = solve(64);
  const double e1 = (solve(1) - reference).norm();
  const double e2 = (solve(2) - reference).norm();
  const double e4 = (solve(4) - reference).norm();
  return std::min(std::log2(e1 / e2), std::log2(e2 / e4));
}

/// Post-transient |z2| / |z0| under unit sine base motion at `omega`, from a
/// closed-loop-free Run. The transient lasts 10 slowest-mode time constants;
/// the amplitude is the Fourier projection over whole periods afterwards.
inline double SimulatedAmplitudeRatio(const PlantParams<double>& plant, double omega,
                                      int measure_periods = 4) {
  const double period = 2 * std::numbers::pi / omega;
  const int steps_per_period = static_cast<int>(std::ceil(period / 1e-3));
  const double dt = period / steps_per_period;
  const double settle = 10.0 / SlowestDecayRate(plant);
  const int settle_periods = static_cast<int>(std::ceil(settle / period));
  const int total_periods = settle_periods + measure_periods;

  SimConfig cfg;
  cfg.plant = plant;
  cfg.excitation = Excitation(SineExcitation{1.0, omega / (2 * std::numbers::pi), 0.0});
  cfg.mode = PassiveMode{};
  cfg.integrator = {IntegrationMethod::kRk4, dt};
  cfg.duration = total_periods * period;
  const Trajectory tr = Run(cfg).trajectory;

  const std::size_t first = static_cast<std::size_t>(settle_periods) * steps_per_period;
  const std::size_t count = static_cast<std::size_t>(measure_periods) * steps_per_period;
  double a = 0, b = 0;
  for (std::size_t k = first; k < first + count; ++k) {
    // Phase from the sample index keeps the projection exact.
    const double phase = 2 * std::numbers::pi * static_cast<double>(k - first) / steps_per_period;
    a += tr[k].z2 * std::cos(phase);
    b += tr[k].z2 * std::sin(phase);
  }
  return 2.0 / static_cast<double>(count) * std::hypot(a, b);
}

/// Random bilateral plant with moderate damping.
inline PlantParams<double> RandomPlant(std::mt19937_64& gen) {
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  };
  PlantParams<double> p;
  p.m1 = uniform(5, 20);
  p.m2 = uniform(50, 200);
  p.c1 = uniform(1e4, 1e5);
  p.c2 = uniform(5e3, 5e4);
  p.beta1 = uniform(200, 2000);
  p.beta2_passive = uniform(200, 2000);
  return p;
}

/// Best objective over `n` seeded uniform points of the gain box.
inline double RandomSearchBest(const SimConfig& sim, const TuneConfig& cfg, int n,
                               std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    Gains g;
    for (int j = 0; j < 3; ++j) {
      g(j) = std::uniform_real_distribution<double>(cfg.lower(j), cfg.upper(j))(gen);
    }
    best = std::min(best, EvaluateGains(sim, g, cfg.objective));
  }
  return best;
}

}  // namespace mr_isolator::testing
