#pragma once

// Steady-state response of the linear (bilateral, constant damping) plant to
// sinusoidal base motion z0 = Re(Z0 exp(i w t)).

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "mr_isolator/errors.hpp"
#include "mr_isolator/model.hpp"

namespace mr_isolator {

template <typename Scalar>
struct FrequencyResponse {
  Scalar omega{0};
  std::complex<Scalar> h1;  // Z1 / Z0
  std::complex<Scalar> h2;  // Z2 / Z0
};

/// Sign of the exponent in the assumed harmonic time dependence.
enum class HarmonicConvention { kPositive, kNegative };

/// Solves the 2x2 complex dynamic-stiffness system
///
///   [k1 + k2 - m1 w^2    -k2        ] [Z1]   [k1 Z0]
///   [-k2                 k2 - m2 w^2] [Z2] = [0    ]
///
/// with k_j = c_j + s i w beta_j, s = +1 or -1 per `convention`, by Cramer's
/// rule. beta2 is the passive coefficient.
template <typename Scalar>
FrequencyResponse<Scalar> Transmissibility(
    const PlantParams<Scalar>& params, Scalar omega,
    HarmonicConvention convention = HarmonicConvention::kPositive) {
  params.Validate();
  if (params.contact_mode != ContactMode::kBilateral) {
    throw ConfigError("plant.contact_mode: frequency response needs bilateral contact");
  }
  using std::isfinite;
  if (!(isfinite(omega) && omega > Scalar(0))) {
    throw ConfigError("omega: must be finite and > 0");
  }
  using Complex = std::complex<Scalar>;
  const Scalar s = convention == HarmonicConvention::kPositive ? Scalar(1) : Scalar(-1);
  const Complex k1(params.c1, s * omega * params.beta1);
  const Complex k2(params.c2, s * omega * params.beta2_passive);
  const Scalar w2 = omega * omega;

  Eigen::Matrix<Complex, 2, 2> a;
  a << k1 + k2 - params.m1 * w2, -k2,
       -k2, k2 - params.m2 * w2;
  const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  // Size of the terms before cancellation.
  const Scalar scale = (std::abs(k1) + std::abs(k2) + params.m1 * w2) *
                           (std::abs(k2) + params.m2 * w2) +
                       std::norm(k2);
  if (std::abs(det) <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale) {
    throw ResonanceSingularityError("frequency response is singular at omega = " +
                                    std::to_string(static_cast<double>(omega)));
  }
  // Right-hand side is (k1, 0) for unit base amplitude.
  return {omega, k1 * a(1, 1) / det, -k1 * a(1, 0) / det};
}

/// Continuous-time state matrix of the bilateral plant for state (z1, v1, z2, v2)
/// with the base held fixed.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> StateMatrix(const PlantParams<Scalar>& params,
                                        Scalar beta2) {
  const Scalar m1 = params.m1, m2 = params.m2;
  Eigen::Matrix<Scalar, 4, 4> a;
  a << 0, 1, 0, 0,
       -(params.c1 + params.c2) / m1, -(params.beta1 + beta2) / m1, params.c2 / m1, beta2 / m1,
       0, 0, 0, 1,
       params.c2 / m2, beta2 / m2, -params.c2 / m2, -beta2 / m2;
  return a;
}

/// Undamped natural frequencies (rad/s), ascending.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> NaturalFrequencies(const PlantParams<Scalar>& params) {
  Eigen::Matrix<Scalar, 2, 2> k, m;
  k << params.c1 + params.c2, -params.c2, -params.c2, params.c2;
  m << params.m1, 0, 0, params.m2;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix<Scalar, 2, 2>> solver(k, m);
  return solver.eigenvalues().cwiseMax(Scalar(0)).cwiseSqrt();
}

/// Slowest modal decay rate, min |Re(lambda)| over the state-matrix spectrum.
/// Zero when some mode is undamped.
template <typename Scalar>
Scalar SlowestDecayRate(const PlantParams<Scalar>& params) {
  Eigen::EigenSolver<Eigen::Matrix<Scalar, 4, 4>> solver(
      StateMatrix(params, params.beta2_passive), /*computeEigenvectors=*/false);
  return solver.eigenvalues().real().cwiseAbs().minCoeff();
}

}  // namespace mr_isolator
