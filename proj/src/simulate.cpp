#include "mr_isolator/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mr_isolator/errors.hpp"

namespace mr_isolator {
namespace {

void Require(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw ConfigError(key + ": " + rule);
}

// Nearest integer ratio a / b, or -1 if a is not an integer multiple of b.
std::int64_t IntegerRatio(double a, double b) {
  const double q = a / b;
  const auto n = static_cast<std::int64_t>(std::llround(q));
  if (n < 1 || std::abs(static_cast<double>(n) * b - a) > 1e-9 * a) return -1;
  return n;
}

}  // namespace

void SimConfig::Validate() const {
  plant.Validate();
  ValidateMode(mode);
  if (!IsPassive(mode)) pid.Validate();
  Require(std::isfinite(integrator.dt) && integrator.dt > 0, "integrator.dt",
          "must be finite and > 0");
  Require(std::isfinite(duration) && duration > 0, "run.duration", "must be finite and > 0");
  Require(integrator.dt <= duration / 10, "integrator.dt", "must be <= run.duration / 10");
  Require(IntegerRatio(duration, integrator.dt) > 0, "run.duration",
          "must be an integer multiple of integrator.dt");
  Require(std::isfinite(z_ref), "run.z_ref", "must be finite");
  Require(record_every >= 1, "run.record_every", "must be >= 1");
  if (!IsPassive(mode)) {
    Require(IntegerRatio(pid.sample_dt, integrator.dt) > 0, "pid.sample_dt",
            "must be an integer multiple of integrator.dt");
  }
}

std::int64_t SimConfig::StepCount() const { return IntegerRatio(duration, integrator.dt); }

std::int64_t SimConfig::ControlRatio() const {
  const std::int64_t r = IntegerRatio(pid.sample_dt, integrator.dt);
  return r > 0 ? r : 1;
}

Metrics ComputeMetrics(std::span<const double> errors, double dt) {
  if (errors.empty()) throw std::invalid_argument("metrics need a non-empty error sequence");
  Metrics m;
  double sum_sq = 0;
  double trapezoid = 0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double a = std::abs(errors[k]);
    m.iae_raw_sum += a;
    m.peak_abs_z2 = std::max(m.peak_abs_z2, a);
    sum_sq += errors[k] * errors[k];
    if (k > 0) trapezoid += std::abs(errors[k - 1]) + a;
  }
  m.iae = 0.5 * dt * trapezoid;
  m.rms_z2 = std::sqrt(sum_sq / static_cast<double>(errors.size()));
  return m;
}

RunResult Run(const SimConfig& config) {
  config.Validate();
  const std::int64_t steps = config.StepCount();
  const std::int64_t control_ratio = config.ControlRatio();
  const double dt = config.integrator.dt;
  const bool passive = IsPassive(config.mode);
  const auto& plant = config.plant;

  RunResult result;
  result.trajectory.reserve(static_cast<std::size_t>(steps / config.record_every + 1));
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(steps + 1));
  double raw_sum = 0;

  Vector4<double> x = Vector4<double>::Zero();
  PidState pid_state;
  Actuation act{plant.beta2_passive, 0.0};

  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double error = config.z_ref - x(2);
    errors.push_back(error);
    if (k % control_ratio == 0) {
      raw_sum += std::abs(error);
      if (!passive && k < steps) {
        const PidOutput out = PidStep(config.pid, pid_state, error);
        pid_state = out.state;
        act = EffectiveActuation(config.mode, out.u, plant.beta2_passive);
      }
    }
    if (k % config.record_every == 0) {
      const BaseMotion base = config.excitation.Eval(t);
      const ForcePair<double> f = Forces(x, base.z0, base.v0, plant, act.beta2_effective);
      result.trajectory.push_back({t, base.z0, x(0), x(2), x(1), x(3), act.beta2_effective,
                                   act.u_extra, f.f1, f.f2});
    }
    if (k == steps) break;

    auto deriv = [&](double tau, const Vector4<double>& state) {
      const BaseMotion base = config.excitation.Eval(tau);
      return Derivatives(state, base.z0, base.v0, plant, act.beta2_effective, act.u_extra);
    };
    try {
      x = Step<double, 4>(deriv, t, x, config.integrator);
    } catch (const InvalidStateError& e) {
      throw DivergenceError("simulation diverged after t = " + std::to_string(t) + ": " +
                                e.what(),
                            t);
    }
  }

  result.metrics = ComputeMetrics(errors, dt);
  result.metrics.iae_raw_sum = raw_sum;
  return result;
}

ComparisonRuns CompareRuns(const SimConfig& base, const ControlMode& active_mode,
                           const PidParams& pid) {
  if (IsPassive(active_mode)) {
    throw ConfigError("mode: comparison needs an active control mode");
  }
  SimConfig passive_cfg = base;
  passive_cfg.mode = PassiveMode{};
  SimConfig active_cfg = base;
  active_cfg.mode = active_mode;
  active_cfg.pid = pid;

  ComparisonRuns runs;
  runs.passive = Run(passive_cfg);
  runs.active = Run(active_cfg);
  runs.report.passive = runs.passive.metrics;
  runs.report.active = runs.active.metrics;
  if (runs.active.metrics.iae > 0) {
    runs.report.reduction_ratio = runs.passive.metrics.iae / runs.active.metrics.iae;
  }
  return runs;
}

}  // namespace mr_isolator
