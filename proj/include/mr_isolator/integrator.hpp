#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "mr_isolator/errors.hpp"
#include "mr_isolator/model.hpp"

namespace mr_isolator {

enum class IntegrationMethod { kRk4, kSemiImplicitEuler };

struct IntegratorConfig {
  IntegrationMethod method{IntegrationMethod::kRk4};
  double dt{1e-3};
};

/// Advances x(t) to x(t + dt) for x' = f(t, x).
///
/// The state is laid out as consecutive (position, velocity) pairs; the
/// semi-implicit Euler scheme updates every velocity from the accelerations at
/// t and then every position from the updated velocities. RK4 makes no
/// assumption on layout.
///
/// Throws DivergenceError naming t and the component if the result is not
/// finite.
template <typename Scalar, int N, typename Deriv>
Eigen::Matrix<Scalar, N, 1> Step(const Deriv& f, Scalar t,
                                 const Eigen::Matrix<Scalar, N, 1>& x,
                                 const IntegratorConfig& config) {
  using Vec = Eigen::Matrix<Scalar, N, 1>;
  const Scalar dt = static_cast<Scalar>(config.dt);
  Vec next;
  switch (config.method) {
    case IntegrationMethod::kRk4: {
      const Scalar half = dt / Scalar(2);
      const Vec k1 = f(t, x);
      const Vec k2 = f(t + half, Vec(x + half * k1));
      const Vec k3 = f(t + half, Vec(x + half * k2));
      const Vec k4 = f(t + dt, Vec(x + dt * k3));
      next = x + (dt / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
      break;
    }
    case IntegrationMethod::kSemiImplicitEuler: {
      if (x.size() % 2 != 0) {
        throw std::invalid_argument("semi-implicit Euler needs (position, velocity) pairs");
      }
      const Vec dx = f(t, x);
      next = x;
      for (Eigen::Index i = 0; i + 1 < x.size(); i += 2) {
        next(i + 1) = x(i + 1) + dt * dx(i + 1);
        next(i) = x(i) + dt * next(i + 1);
      }
      break;
    }
  }
  using std::isfinite;
  for (Eigen::Index i = 0; i < next.size(); ++i) {
    if (!isfinite(next(i))) {
      throw DivergenceError("integration diverged stepping from t = " +
                                std::to_string(static_cast<double>(t)) +
                                ": state component " + std::to_string(i) +
                                " is not finite",
                            static_cast<double>(t));
    }
  }
  return next;
}

/// Plant-state overload. The caller owns time bookkeeping for long runs;
/// here t simply advances by dt.
template <typename Scalar, typename Deriv>
SimState<Scalar> Step(const Deriv& f, const SimState<Scalar>& state,
                      const IntegratorConfig& config) {
  return {state.t + static_cast<Scalar>(config.dt),
          Step<Scalar, 4>(f, state.t, state.x, config)};
}

}  // namespace mr_isolator
