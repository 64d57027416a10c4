#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mr_isolator/control.hpp"
#include "mr_isolator/excitation.hpp"
#include "mr_isolator/integrator.hpp"
#include "mr_isolator/model.hpp"

namespace mr_isolator {

struct SimConfig {
  PlantParams<double> plant;
  Excitation excitation;
  ControlMode mode{SemiActiveDampingMode{}};
  // Unused in passive mode.
  PidParams pid;
  IntegratorConfig integrator;
  double duration{5};
  double z_ref{0};
  int record_every{1};

  /// Throws ConfigError naming the offending key.
  void Validate() const;
  std::int64_t StepCount() const;
  /// Integrator steps per controller sample.
  std::int64_t ControlRatio() const;
};

struct TrajectoryRow {
  double t, z0, z1, z2, v1, v2, beta2_eff, u_extra, f1, f2;
};

using Trajectory = std::vector<TrajectoryRow>;

struct Metrics {
  double iae{0};          // trapezoidal integral of |z2 - z_ref|
  double rms_z2{0};
  double peak_abs_z2{0};
  double iae_raw_sum{0};  // plain sum of |error| at controller samples
};

struct RunResult {
  Trajectory trajectory;
  Metrics metrics;
};

/// Closed-loop run from the zero state. Throws ConfigError for an invalid
/// config and DivergenceError if the state leaves the finite range.
RunResult Run(const SimConfig& config);

/// Error-sequence metrics at uniform spacing dt. iae_raw_sum covers every
/// sample. Throws std::invalid_argument for an empty sequence.
Metrics ComputeMetrics(std::span<const double> errors, double dt);

struct ComparisonReport {
  Metrics passive;
  Metrics active;
  // passive.iae / active.iae; empty when active.iae == 0.
  std::optional<double> reduction_ratio;
};

struct ComparisonRuns {
  RunResult passive;
  RunResult active;
  ComparisonReport report;
};

/// Runs `base` in passive mode and again under `active_mode` with `pid`, on
/// the same excitation.
ComparisonRuns CompareRuns(const SimConfig& base, const ControlMode& active_mode,
                           const PidParams& pid);

inline ComparisonReport Compare(const SimConfig& base, const ControlMode& active_mode,
                                const PidParams& pid) {
  return CompareRuns(base, active_mode, pid).report;
}

}  // namespace mr_isolator
