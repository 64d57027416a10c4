#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace mr_isolator {

struct BaseMotion {
  double z0{0};
  double v0{0};
};

struct SineExcitation {
  double amplitude{1};
  double frequency_hz{1};
  double phase_rad{0};
};

/// z0 = amplitude for t >= t_start, 0 before. v0 is 0 everywhere.
struct StepExcitation {
  double amplitude{1};
  double t_start{0};
};

/// Linear frequency sweep over [0, duration], then a constant f_end tone with
/// continuous phase.
struct ChirpExcitation {
  double amplitude{1};
  double f_start_hz{0.5};
  double f_end_hz{5};
  double duration{5};
};

/// Seeded band-limited multisine. Components have equal amplitude, random
/// frequencies in [f_lo_hz, f_hi_hz] and random phases, and the sum is scaled
/// so that max |z0| over all t equals peak_bound.
struct MultiSineExcitation {
  std::uint64_t seed{42};
  int n_components{8};
  double f_lo_hz{0.5};
  double f_hi_hz{5};
  double peak_bound{1};
};

using ExcitationSpec =
    std::variant<SineExcitation, StepExcitation, ChirpExcitation, MultiSineExcitation>;

/// Component frequencies of a multisine are multiples of this resolution, so
/// the signal is periodic with period 1 / resolution and its global peak is
/// computable.
inline constexpr double kMultiSineResolutionHz = 0.01;

/// An evaluable base-motion signal. Immutable after construction.
class Excitation {
 public:
  struct Component {
    double frequency_hz;
    double phase_rad;
    double amplitude;
  };

  /// Throws ConfigError (naming an `excitation.*` key) for invalid specs.
  explicit Excitation(ExcitationSpec spec);
  Excitation() : Excitation(MultiSineExcitation{}) {}

  const ExcitationSpec& spec() const { return spec_; }

  /// Multisine components after normalization; empty for other variants.
  const std::vector<Component>& components() const { return components_; }

  /// z0(t) and its exact derivative.
  BaseMotion Eval(double t) const;

 private:
  ExcitationSpec spec_;
  std::vector<Component> components_;
};

}  // namespace mr_isolator
