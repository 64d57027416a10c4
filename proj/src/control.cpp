#include "mr_isolator/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mr_isolator/errors.hpp"

namespace mr_isolator {
namespace {

void Require(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw ConfigError(key + ": " + rule);
}

bool NonNegative(double v) { return std::isfinite(v) && v >= 0; }

}  // namespace

void PidParams::Validate() const {
  Require(NonNegative(kp), "pid.kp", "must be finite and >= 0");
  Require(NonNegative(ki), "pid.ki", "must be finite and >= 0");
  Require(NonNegative(kd), "pid.kd", "must be finite and >= 0");
  Require(std::isfinite(derivative_filter_n) && derivative_filter_n > 0,
          "pid.derivative_filter_n", "must be finite and > 0");
  Require(std::isfinite(output_min), "pid.output_min", "must be finite");
  Require(std::isfinite(output_max) && output_max > output_min, "pid.output_max",
          "must be finite and > pid.output_min");
  Require(std::isfinite(sample_dt) && sample_dt > 0, "pid.sample_dt", "must be finite and > 0");
}

PidOutput PidStep(const PidParams& params, const PidState& state, double error) {
  if (!std::isfinite(error)) {
    throw ControllerFault("PID received a non-finite error sample");
  }
  const double dt = params.sample_dt;
  const double tf = params.kp > 0 ? params.kd / (params.kp * params.derivative_filter_n) : 0.0;

  PidState next = state;
  next.deriv_filtered =
      (tf * state.deriv_filtered + (error - state.prev_error)) / (tf + dt);
  next.prev_error = error;
  next.integral_accum = state.integral_accum + error * dt;

  auto law = [&](double integral) {
    return params.kp * error + params.ki * integral + params.kd * next.deriv_filtered;
  };
  double u_unclamped = law(next.integral_accum);
  if (params.anti_windup == AntiWindup::kClampIntegrator) {
    const bool deepens_high = u_unclamped > params.output_max && error > 0;
    const bool deepens_low = u_unclamped < params.output_min && error < 0;
    if (deepens_high || deepens_low) {
      next.integral_accum = state.integral_accum;
      u_unclamped = law(next.integral_accum);
    }
  }
  return {std::clamp(u_unclamped, params.output_min, params.output_max), u_unclamped, next};
}

void ValidateMode(const ControlMode& mode) {
  if (const auto* m = std::get_if<SemiActiveDampingMode>(&mode)) {
    Require(NonNegative(m->beta_min), "mode.beta_min", "must be finite and >= 0");
    Require(std::isfinite(m->beta_max) && m->beta_max >= m->beta_min, "mode.beta_max",
            "must be finite and >= mode.beta_min");
  } else if (const auto* m = std::get_if<ActiveForceMode>(&mode)) {
    Require(std::isfinite(m->u_min), "mode.u_min", "must be finite");
    Require(std::isfinite(m->u_max) && m->u_max >= m->u_min, "mode.u_max",
            "must be finite and >= mode.u_min");
  }
}

Actuation EffectiveActuation(const ControlMode& mode, double u, double beta2_passive) {
  if (const auto* m = std::get_if<SemiActiveDampingMode>(&mode)) {
    return {std::clamp(u, m->beta_min, m->beta_max), 0.0};
  }
  if (const auto* m = std::get_if<ActiveForceMode>(&mode)) {
    return {beta2_passive, std::clamp(u, m->u_min, m->u_max)};
  }
  return {beta2_passive, 0.0};
}

}  // namespace mr_isolator
