#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "mr_isolator/simulate.hpp"

namespace mr_isolator {

/// (kp, ki, kd)
using Gains = Eigen::Vector3d;

enum class TuneObjective { kIae, kRms, kPeak };

struct NelderMeadSettings {
  // Fraction of each box edge used to build the initial simplex.
  double initial_simplex_scale{0.1};
  double reflection{1.0};
  double expansion{2.0};
  double contraction{0.5};
  double shrink{0.5};
  int max_evals{400};  // per restart
  // Stop when (worst - best) <= tolerance * (1 + |best|) across the simplex.
  double tolerance{1e-6};
};

struct TuneConfig {
  Gains lower{0, 0, 0};
  Gains upper{1e5, 1e5, 1e4};
  TuneObjective objective{TuneObjective::kIae};
  NelderMeadSettings optimizer;
  int restarts{5};
  std::uint64_t seed{1};

  /// Throws ConfigError naming the offending `tune.*` key.
  void Validate() const;
};

struct TuneResult {
  Gains best_gains{Gains::Zero()};
  double best_objective{0};
  int eval_count{0};
  // Best objective so far, one entry per simplex iteration over all restarts.
  std::vector<double> history;
};

/// Objective value of the active run with `gains` substituted into sim.pid.
/// Diverging runs score +infinity.
double EvaluateGains(const SimConfig& sim, const Gains& gains, TuneObjective objective);

/// Clamps gains into [lower, upper] componentwise.
Gains ProjectToBox(const Gains& gains, const TuneConfig& cfg);

/// Box-projected Nelder-Mead with seeded restarts. Restart 0 starts from the
/// gains already in sim.pid; later restarts start from seeded uniform points
/// in the box. Independent evaluations (initial simplex, shrink) run on up to
/// `workers` threads; the result does not depend on the worker count.
///
/// Throws ConfigError if sim is passive or cfg is invalid, and
/// TuningFailedError if every evaluation diverged.
TuneResult Tune(const SimConfig& sim, const TuneConfig& cfg, std::size_t workers = 1);

}  // namespace mr_isolator
