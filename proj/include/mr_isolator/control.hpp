#pragma once

#include <variant>

namespace mr_isolator {

enum class AntiWindup { kClampIntegrator, kNone };

/// Parallel-form discrete PID with a first-order filtered derivative.
struct PidParams {
  double kp{0};
  double ki{0};
  double kd{0};
  double derivative_filter_n{10};
  double output_min{-1e5};
  double output_max{1e5};
  double sample_dt{1e-3};
  AntiWindup anti_windup{AntiWindup::kClampIntegrator};

  /// Throws ConfigError naming the first bad `pid.*` key.
  void Validate() const;
};

struct PidState {
  double integral_accum{0};
  double deriv_filtered{0};
  double prev_error{0};

  void Reset() { *this = PidState{}; }
};

struct PidOutput {
  double u{0};            // clamped to [output_min, output_max]
  double u_unclamped{0};  // kp e + ki I + kd D after the integrator update
  PidState state;
};

/// One controller sample. The integral uses the rectangle rule
/// I += e * dt; the derivative is backward-difference filtered with time
/// constant Tf = kd / (kp * N):
///
///   D = Tf / (Tf + dt) * D_prev + (e - e_prev) / (Tf + dt)
///
/// which reduces to the raw difference when Tf = 0 (including kp = 0).
/// With kClampIntegrator the integrator holds while its update would push a
/// saturated output further into saturation.
///
/// Throws ControllerFault for a non-finite error sample.
PidOutput PidStep(const PidParams& params, const PidState& state, double error);

struct PassiveMode {};

/// PID output is the upper damping coefficient, clamped to the damper range.
struct SemiActiveDampingMode {
  double beta_min{50};
  double beta_max{5000};
};

/// PID output is a force on m2 (reacting on m1); damping stays passive.
struct ActiveForceMode {
  double u_min{-5e4};
  double u_max{5e4};
};

using ControlMode = std::variant<PassiveMode, SemiActiveDampingMode, ActiveForceMode>;

/// Throws ConfigError naming the first bad `mode.*` key.
void ValidateMode(const ControlMode& mode);

inline bool IsPassive(const ControlMode& mode) {
  return std::holds_alternative<PassiveMode>(mode);
}

struct Actuation {
  double beta2_effective{0};
  double u_extra{0};
};

/// Maps a raw controller output onto the plant's actuation channels.
Actuation EffectiveActuation(const ControlMode& mode, double u, double beta2_passive);

}  // namespace mr_isolator
