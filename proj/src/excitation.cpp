#include "mr_isolator/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mr_isolator/errors.hpp"

namespace mr_isolator {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void Require(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw ConfigError("excitation." + key + ": " + rule);
}

bool Finite(double v) { return std::isfinite(v); }

// Platform-independent uniform draw on [0, 1).
double Uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double SumOfSines(const std::vector<Excitation::Component>& comps, double t) {
  double s = 0;
  for (const auto& c : comps) s += c.amplitude * std::sin(kTwoPi * c.frequency_hz * t + c.phase_rad);
  return s;
}

// Maximum of |s| on [a, b], assuming a single peak inside.
double GoldenPeak(const std::vector<Excitation::Component>& comps, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = std::abs(SumOfSines(comps, x1));
  double f2 = std::abs(SumOfSines(comps, x2));
  for (int i = 0; i < 80 && b - a > 1e-15; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = std::abs(SumOfSines(comps, x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = std::abs(SumOfSines(comps, x1));
    }
  }
  return std::max({f1, f2, std::abs(SumOfSines(comps, a)), std::abs(SumOfSines(comps, b))});
}

// Global max of |s| for a signal whose frequencies are multiples of
// kMultiSineResolutionHz: dense scan over one period, then golden-section
// refinement of every grid peak that could hide the true maximum.
double PeriodicPeak(const std::vector<Excitation::Component>& comps, double f_max) {
  const double period = 1.0 / kMultiSineResolutionHz;
  const double h = 1.0 / (64.0 * f_max);
  const auto n = static_cast<std::size_t>(std::ceil(period / h));
  std::vector<double> grid(n + 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = std::abs(SumOfSines(comps, static_cast<double>(i) * h));
  }
  const double grid_max = *std::max_element(grid.begin(), grid.end());

  // |s''| <= sum a (2 pi f)^2 bounds how far a peak can sit above its grid
  // neighbours.
  double curvature = 0;
  for (const auto& c : comps) curvature += c.amplitude * std::pow(kTwoPi * c.frequency_hz, 2);
  const double slack = 0.5 * curvature * h * h;

  double peak = grid_max;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (grid[i] >= grid[i - 1] && grid[i] >= grid[i + 1] && grid[i] + slack >= grid_max) {
      const double t = static_cast<double>(i) * h;
      peak = std::max(peak, GoldenPeak(comps, t - h, t + h));
    }
  }
  return peak;
}

}  // namespace

Excitation::Excitation(ExcitationSpec spec) : spec_(std::move(spec)) {
  std::visit(
      [this](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SineExcitation>) {
          Require(Finite(s.amplitude) && s.amplitude >= 0, "amplitude", "must be finite and >= 0");
          Require(Finite(s.frequency_hz) && s.frequency_hz > 0, "frequency_hz", "must be finite and > 0");
          Require(Finite(s.phase_rad), "phase_rad", "must be finite");
        } else if constexpr (std::is_same_v<T, StepExcitation>) {
          Require(Finite(s.amplitude) && s.amplitude >= 0, "amplitude", "must be finite and >= 0");
          Require(Finite(s.t_start) && s.t_start >= 0, "t_start", "must be finite and >= 0");
        } else if constexpr (std::is_same_v<T, ChirpExcitation>) {
          Require(Finite(s.amplitude) && s.amplitude >= 0, "amplitude", "must be finite and >= 0");
          Require(Finite(s.f_start_hz) && s.f_start_hz > 0, "f_start_hz", "must be finite and > 0");
          Require(Finite(s.f_end_hz) && s.f_end_hz > 0, "f_end_hz", "must be finite and > 0");
          Require(Finite(s.duration) && s.duration > 0, "duration", "must be finite and > 0");
        } else {
          Require(s.n_components >= 1, "n_components", "must be >= 1");
          Require(Finite(s.f_lo_hz) && s.f_lo_hz > 0, "band", "lower edge must be finite and > 0");
          Require(Finite(s.f_hi_hz) && s.f_hi_hz > s.f_lo_hz, "band", "upper edge must exceed lower edge");
          Require(Finite(s.peak_bound) && s.peak_bound >= 0, "peak_bound", "must be finite and >= 0");
          const auto k_lo = static_cast<std::uint64_t>(std::ceil(s.f_lo_hz / kMultiSineResolutionHz - 1e-9));
          const auto k_hi = static_cast<std::uint64_t>(std::floor(s.f_hi_hz / kMultiSineResolutionHz + 1e-9));
          Require(k_lo <= k_hi, "band", "must contain a multiple of 0.01 Hz");

          std::mt19937_64 gen(s.seed);
          components_.reserve(static_cast<std::size_t>(s.n_components));
          for (int i = 0; i < s.n_components; ++i) {
            const std::uint64_t k = k_lo + gen() % (k_hi - k_lo + 1);
            const double f = std::clamp(static_cast<double>(k) * kMultiSineResolutionHz,
                                        s.f_lo_hz, s.f_hi_hz);
            const double phase = kTwoPi * Uniform01(gen);
            components_.push_back({f, phase, 1.0});
          }
          double f_max = 0;
          for (const auto& c : components_) f_max = std::max(f_max, c.frequency_hz);
          const double peak = PeriodicPeak(components_, f_max);
          const double scale = s.peak_bound / peak;
          for (auto& c : components_) c.amplitude = scale;
        }
      },
      spec_);
}

BaseMotion Excitation::Eval(double t) const {
  return std::visit(
      [this, t](const auto& s) -> BaseMotion {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SineExcitation>) {
          const double w = kTwoPi * s.frequency_hz;
          return {s.amplitude * std::sin(w * t + s.phase_rad),
                  s.amplitude * w * std::cos(w * t + s.phase_rad)};
        } else if constexpr (std::is_same_v<T, StepExcitation>) {
          return {t >= s.t_start ? s.amplitude : 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, ChirpExcitation>) {
          const double rate = (s.f_end_hz - s.f_start_hz) / s.duration;
          double phase, freq;
          if (t <= s.duration) {
            phase = kTwoPi * (s.f_start_hz * t + 0.5 * rate * t * t);
            freq = s.f_start_hz + rate * t;
          } else {
            phase = kTwoPi * (0.5 * (s.f_start_hz + s.f_end_hz) * s.duration +
                              s.f_end_hz * (t - s.duration));
            freq = s.f_end_hz;
          }
          return {s.amplitude * std::sin(phase), s.amplitude * kTwoPi * freq * std::cos(phase)};
        } else {
          BaseMotion m;
          for (const auto& c : components_) {
            const double w = kTwoPi * c.frequency_hz;
            const double arg = w * t + c.phase_rad;
            m.z0 += c.amplitude * std::sin(arg);
            m.v0 += c.amplitude * w * std::cos(arg);
          }
          return m;
        }
      },
      spec_);
}

}  // namespace mr_isolator
