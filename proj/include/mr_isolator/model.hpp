#pragma once

// Two-mass vibration-isolation plant.
//
//   m2  protected (sprung) body        z2
//   |   upper spring c2 / damper beta2 (the controllable channel)
//   m1  intermediate (unsprung) body   z1
//   |   lower spring c1 / damper beta1
//   ==  moving base                    z0
//
// Equations of motion:
//   m2 * z2'' + f2 = 0
//   m1 * z1'' + f1 - f2 = 0
// with an optional actuator force u acting on m2 and reacting on m1.

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "mr_isolator/errors.hpp"

namespace mr_isolator {

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

enum class ContactMode {
  kBilateral,
  // Each spring-damper transmits force only while its gap is non-negative.
  kUnilateral,
};

template <typename Scalar>
struct PlantParams {
  Scalar m1{10};
  Scalar m2{100};
  Scalar c1{4e4};
  Scalar c2{1e4};
  Scalar beta1{300};
  // The constant damping coefficient k of the passive configuration.
  Scalar beta2_passive{500};
  ContactMode contact_mode{ContactMode::kBilateral};

  /// Throws ConfigError naming the first bad field.
  void Validate() const {
    using std::isfinite;
    auto positive = [](const char* name, Scalar v) {
      if (!(isfinite(v) && v > Scalar(0))) {
        throw ConfigError(std::string("plant.") + name + ": must be finite and > 0");
      }
    };
    auto non_negative = [](const char* name, Scalar v) {
      if (!(isfinite(v) && v >= Scalar(0))) {
        throw ConfigError(std::string("plant.") + name + ": must be finite and >= 0");
      }
    };
    positive("m1", m1);
    positive("m2", m2);
    non_negative("c1", c1);
    non_negative("c2", c2);
    non_negative("beta1", beta1);
    non_negative("beta2_passive", beta2_passive);
  }
};

/// Plant state (z1, v1, z2, v2) at time t. The vector layout is pairs of
/// (position, velocity), which the integrator relies on.
template <typename Scalar>
struct SimState {
  Scalar t{0};
  Vector4<Scalar> x{Vector4<Scalar>::Zero()};

  Scalar z1() const { return x(0); }
  Scalar v1() const { return x(1); }
  Scalar z2() const { return x(2); }
  Scalar v2() const { return x(3); }
};

template <typename Scalar>
struct ForcePair {
  Scalar f1{0};
  Scalar f2{0};
};

namespace internal {

template <typename Scalar>
void RequireFinite(const char* what, Scalar value) {
  using std::isfinite;
  if (!isfinite(value)) {
    throw InvalidStateError(std::string("non-finite ") + what);
  }
}

template <typename Scalar>
void RequireFiniteState(const Vector4<Scalar>& x) {
  static constexpr const char* kNames[] = {"z1", "v1", "z2", "v2"};
  for (int i = 0; i < 4; ++i) RequireFinite(kNames[i], x(i));
}

}  // namespace internal

/// Upper spring-damper force between m1 and m2.
template <typename Scalar>
Scalar ForceF2(const Vector4<Scalar>& x, const PlantParams<Scalar>& params,
               Scalar beta2_effective) {
  internal::RequireFiniteState(x);
  internal::RequireFinite("beta2_effective", beta2_effective);
  const Scalar gap = x(2) - x(0);
  if (params.contact_mode == ContactMode::kUnilateral && gap < Scalar(0)) {
    return Scalar(0);
  }
  return beta2_effective * (x(3) - x(1)) + params.c2 * gap;
}

/// Lower spring-damper force between the base and m1.
template <typename Scalar>
Scalar ForceF1(const Vector4<Scalar>& x, Scalar z0, Scalar v0,
               const PlantParams<Scalar>& params) {
  internal::RequireFiniteState(x);
  internal::RequireFinite("z0", z0);
  internal::RequireFinite("v0", v0);
  const Scalar gap = x(0) - z0;
  if (params.contact_mode == ContactMode::kUnilateral && gap < Scalar(0)) {
    return Scalar(0);
  }
  return params.beta1 * (x(1) - v0) + params.c1 * gap;
}

template <typename Scalar>
ForcePair<Scalar> Forces(const Vector4<Scalar>& x, Scalar z0, Scalar v0,
                         const PlantParams<Scalar>& params,
                         Scalar beta2_effective) {
  return {ForceF1(x, z0, v0, params), ForceF2(x, params, beta2_effective)};
}

/// State derivative (z1', v1', z2', v2').
template <typename Scalar>
Vector4<Scalar> Derivatives(const Vector4<Scalar>& x, Scalar z0, Scalar v0,
                            const PlantParams<Scalar>& params,
                            Scalar beta2_effective, Scalar u_extra) {
  internal::RequireFinite("u_extra", u_extra);
  const Scalar f1 = ForceF1(x, z0, v0, params);
  const Scalar f2 = ForceF2(x, params, beta2_effective);
  Vector4<Scalar> dx;
  dx << x(1), (f2 - f1 - u_extra) / params.m1, x(3), (-f2 + u_extra) / params.m2;
  static constexpr const char* kNames[] = {"dz1", "dv1", "dz2", "dv2"};
  for (int i = 0; i < 4; ++i) internal::RequireFinite(kNames[i], dx(i));
  return dx;
}

/// Kinetic plus elastic energy of the bilateral plant relative to a base at rest
/// at z0 = 0.
template <typename Scalar>
Scalar MechanicalEnergy(const Vector4<Scalar>& x, const PlantParams<Scalar>& params) {
  const Scalar rel = x(2) - x(0);
  return Scalar(0.5) * (params.m1 * x(1) * x(1) + params.m2 * x(3) * x(3) +
                        params.c1 * x(0) * x(0) + params.c2 * rel * rel);
}

}  // namespace mr_isolator
