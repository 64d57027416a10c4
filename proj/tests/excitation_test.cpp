#include "mr_isolator/excitation.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mr_isolator/errors.hpp"

namespace mr_isolator {
namespace {

TEST(Excitation, SineAtZero) {
  const Excitation e(SineExcitation{1.0, 1.0, 0.0});
  const BaseMotion m = e.Eval(0.0);
  EXPECT_EQ(m.z0, 0.0);
  EXPECT_DOUBLE_EQ(m.v0, 2 * std::numbers::pi);
}

TEST(Excitation, StepBeforeAndAt) {
  const Excitation e(StepExcitation{0.5, 1.0});
  EXPECT_EQ(e.Eval(0.5).z0, 0.0);
  EXPECT_EQ(e.Eval(0.5).v0, 0.0);
  EXPECT_EQ(e.Eval(1.0).z0, 0.5);
  EXPECT_EQ(e.Eval(3.0).v0, 0.0);
}

TEST(Excitation, ChirpIsContinuousAtSweepEnd) {
  const Excitation e(ChirpExcitation{2.0, 0.5, 5.0, 4.0});
  const double h = 1e-9;
  EXPECT_NEAR(e.Eval(4.0 - h).z0, e.Eval(4.0 + h).z0, 1e-6);
  EXPECT_NEAR(e.Eval(4.0 - h).v0, e.Eval(4.0 + h).v0, 1e-5);
}

void ExpectDerivativeMatchesCentralDifference(const Excitation& e, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  // The simulation horizon.
  std::uniform_real_distribution<double> time(0.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = time(gen);
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    const double fd = (e.Eval(t + h).z0 - e.Eval(t - h).z0) / (2 * h);
    ASSERT_LE(std::abs(e.Eval(t).v0 - fd), 1e-6) << "t = " << t;
  }
}

TEST(Excitation, MultiSineDerivativeIsExact) {
  ExpectDerivativeMatchesCentralDifference(Excitation(MultiSineExcitation{}), 1);
  ExpectDerivativeMatchesCentralDifference(
      Excitation(MultiSineExcitation{99, 3, 1.0, 2.0, 0.25}), 2);
}

TEST(Excitation, ChirpDerivativeIsExact) {
  ExpectDerivativeMatchesCentralDifference(Excitation(ChirpExcitation{1.0, 0.5, 3.0, 8.0}), 3);
}

TEST(Excitation, MultiSineDeterministicPerSeed) {
  const Excitation a(MultiSineExcitation{42});
  const Excitation b(MultiSineExcitation{42});
  const Excitation c(MultiSineExcitation{43});
  bool differs = false;
  for (int i = 0; i <= 500; ++i) {
    const double t = 0.01 * i;
    EXPECT_EQ(a.Eval(t).z0, b.Eval(t).z0);
    EXPECT_EQ(a.Eval(t).v0, b.Eval(t).v0);
    differs = differs || a.Eval(t).z0 != c.Eval(t).z0;
  }
  EXPECT_TRUE(differs);
}

TEST(Excitation, MultiSineComponentsInBand) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Excitation e(MultiSineExcitation{seed, 16, 0.5, 5.0, 1.0});
    ASSERT_EQ(e.components().size(), 16u);
    for (const auto& c : e.components()) {
      EXPECT_GE(c.frequency_hz, 0.5);
      EXPECT_LE(c.frequency_hz, 5.0);
    }
  }
}

TEST(Excitation, MultiSinePeakBound) {
  for (std::uint64_t seed : {1u, 42u, 77u}) {
    const double bound = 0.75;
    const Excitation e(MultiSineExcitation{seed, 8, 0.5, 5.0, bound});
    double peak = 0;
    // Dense grid over one full period of the signal.
    for (int i = 0; i <= 400000; ++i) peak = std::max(peak, std::abs(e.Eval(2.5e-4 * i).z0));
    EXPECT_LE(peak, bound + 1e-12) << "seed " << seed;
    // The normalization targets the true maximum, so the grid gets close.
    EXPECT_GT(peak, bound * (1 - 1e-4)) << "seed " << seed;
  }
}

TEST(Excitation, ZeroPeakBoundIsSilent) {
  const Excitation e(MultiSineExcitation{5, 8, 0.5, 5.0, 0.0});
  EXPECT_EQ(e.Eval(1.234).z0, 0.0);
  EXPECT_EQ(e.Eval(1.234).v0, 0.0);
}

TEST(Excitation, RejectsInvalidSpecs) {
  EXPECT_THROW(Excitation(SineExcitation{-1, 1, 0}), ConfigError);
  EXPECT_THROW(Excitation(SineExcitation{1, 0, 0}), ConfigError);
  EXPECT_THROW(Excitation(StepExcitation{1, -1}), ConfigError);
  EXPECT_THROW(Excitation(ChirpExcitation{1, 1, 2, 0}), ConfigError);
  EXPECT_THROW(Excitation(MultiSineExcitation{1, 0}), ConfigError);
  EXPECT_THROW(Excitation(MultiSineExcitation{1, 8, 5.0, 0.5}), ConfigError);
  EXPECT_THROW(Excitation(MultiSineExcitation{1, 8, 1.001, 1.002}), ConfigError);
  EXPECT_THROW(Excitation(MultiSineExcitation{1, 8, 0.5, 5.0, -1}), ConfigError);
}

}  // namespace
}  // namespace mr_isolator
