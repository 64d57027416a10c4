#include "mr_isolator/control.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mr_isolator/errors.hpp"

namespace mr_isolator {
namespace {

PidParams Gains(double kp, double ki, double kd) {
  PidParams p;
  p.kp = kp;
  p.ki = ki;
  p.kd = kd;
  return p;
}

TEST(PidStep, PureProportional) {
  EXPECT_DOUBLE_EQ(PidStep(Gains(2, 0, 0), PidState{}, 0.3).u, 0.6);
}

TEST(PidStep, RectangleRuleIntegral) {
  PidParams p = Gains(0, 1, 0);
  p.sample_dt = 0.01;
  PidState s;
  double u = 0;
  for (int i = 0; i < 100; ++i) {
    const PidOutput out = PidStep(p, s, 1.0);
    s = out.state;
    u = out.u;
  }
  EXPECT_NEAR(u, 1.0, 1e-12);
}

TEST(PidStep, SaturationHoldsIntegrator) {
  PidParams p = Gains(10, 0, 0);
  p.output_max = 1;
  PidState s;
  s.integral_accum = 0.25;
  const PidOutput out = PidStep(p, s, 5.0);
  EXPECT_EQ(out.u, 1.0);
  EXPECT_EQ(out.state.integral_accum, 0.25);

  // Same with an active integral path pushing into the upper limit.
  p.ki = 3;
  const PidOutput held = PidStep(p, s, 5.0);
  EXPECT_EQ(held.u, 1.0);
  EXPECT_EQ(held.state.integral_accum, 0.25);
}

TEST(PidStep, IntegratorUnwindsOutOfSaturation) {
  PidParams p = Gains(10, 3, 0);
  p.output_max = 1;
  PidState s;
  s.integral_accum = 0.25;
  // Negative error drives the integral back toward the band.
  const PidOutput out = PidStep(p, s, -0.01);
  EXPECT_DOUBLE_EQ(out.state.integral_accum, 0.25 - 0.01 * p.sample_dt);
}

TEST(PidStep, NoAntiWindupKeepsIntegrating) {
  PidParams p = Gains(10, 3, 0);
  p.output_max = 1;
  p.anti_windup = AntiWindup::kNone;
  const PidOutput out = PidStep(p, PidState{}, 5.0);
  EXPECT_EQ(out.u, 1.0);
  EXPECT_DOUBLE_EQ(out.state.integral_accum, 5.0 * p.sample_dt);
}

TEST(PidStep, FilteredDerivativeStepResponse) {
  // Tf = kd / (kp N) = 1 / (1 * 10) = 0.1
  PidParams p = Gains(1, 0, 1);
  p.sample_dt = 0.01;
  const PidOutput first = PidStep(p, PidState{}, 1.0);
  EXPECT_DOUBLE_EQ(first.state.deriv_filtered, 1.0 / (0.1 + 0.01));
  const PidOutput second = PidStep(p, first.state, 1.0);
  EXPECT_DOUBLE_EQ(second.state.deriv_filtered, 0.1 / 0.11 * first.state.deriv_filtered);
}

TEST(PidStep, RawDifferenceWithoutProportionalGain) {
  PidParams p = Gains(0, 0, 2);
  p.sample_dt = 0.1;
  const PidOutput out = PidStep(p, PidState{}, 0.5);
  EXPECT_DOUBLE_EQ(out.u, 2 * 0.5 / 0.1);
}

TEST(PidStep, ConstantInputSettlesWithoutKick) {
  PidParams p = Gains(4, 2, 1);
  PidState s;
  s.integral_accum = 0.3;
  double last = 0;
  for (int i = 0; i < 2000; ++i) {
    const PidOutput out = PidStep(p, s, 0.0);
    s = out.state;
    last = out.u;
  }
  EXPECT_DOUBLE_EQ(last, 2 * 0.3);
  EXPECT_DOUBLE_EQ(PidStep(p, s, 0.0).u, last);
}

TEST(PidStep, UnclampedOutputIsLinearInError) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0, 1);
  PidParams p = Gains(3, 7, 0.5);
  p.anti_windup = AntiWindup::kNone;
  p.output_min = -1;
  p.output_max = 1;
  const double lambda = 2.5;
  PidState a, b;
  for (int i = 0; i < 500; ++i) {
    const double e = noise(gen);
    const PidOutput oa = PidStep(p, a, e);
    const PidOutput ob = PidStep(p, b, lambda * e);
    EXPECT_NEAR(ob.u_unclamped, lambda * oa.u_unclamped, 1e-9 * (1 + std::abs(ob.u_unclamped)));
    a = oa.state;
    b = ob.state;
  }
}

TEST(PidStep, DeterministicAndReset) {
  PidParams p = Gains(1, 2, 3);
  PidState s;
  s.integral_accum = 1;
  s.deriv_filtered = 2;
  s.prev_error = 3;
  const PidOutput a = PidStep(p, s, 0.7);
  const PidOutput b = PidStep(p, s, 0.7);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.state.deriv_filtered, b.state.deriv_filtered);
  s.Reset();
  EXPECT_EQ(s.integral_accum, 0.0);
  EXPECT_EQ(s.deriv_filtered, 0.0);
  EXPECT_EQ(s.prev_error, 0.0);
}

TEST(PidStep, NonFiniteErrorFaults) {
  EXPECT_THROW(PidStep(PidParams{}, PidState{}, std::nan("")), ControllerFault);
}

TEST(PidParams, Validation) {
  PidParams p;
  EXPECT_NO_THROW(p.Validate());
  p.kp = -1;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.output_max = p.output_min;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.sample_dt = 0;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.derivative_filter_n = 0;
  EXPECT_THROW(p.Validate(), ConfigError);
}

TEST(EffectiveActuation, PassiveIgnoresController) {
  const Actuation a = EffectiveActuation(PassiveMode{}, 1e9, 500);
  EXPECT_EQ(a.beta2_effective, 500.0);
  EXPECT_EQ(a.u_extra, 0.0);
}

TEST(EffectiveActuation, SemiActiveClamp) {
  const ControlMode mode = SemiActiveDampingMode{50, 5000};
  EXPECT_EQ(EffectiveActuation(mode, -10, 500).beta2_effective, 50.0);
  EXPECT_EQ(EffectiveActuation(mode, 700, 500).beta2_effective, 700.0);
  EXPECT_EQ(EffectiveActuation(mode, 1e6, 500).beta2_effective, 5000.0);
  EXPECT_EQ(EffectiveActuation(mode, 700, 500).u_extra, 0.0);
}

TEST(EffectiveActuation, ActiveForceClamp) {
  const ControlMode mode = ActiveForceMode{-100, 100};
  const Actuation a = EffectiveActuation(mode, -250, 500);
  EXPECT_EQ(a.beta2_effective, 500.0);
  EXPECT_EQ(a.u_extra, -100.0);
}

TEST(EffectiveActuation, SemiActiveChannelIsDissipative) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1e4, 1e4), dv(-5, 5);
  const ControlMode mode = SemiActiveDampingMode{50, 5000};
  for (int i = 0; i < 1000; ++i) {
    const double beta = EffectiveActuation(mode, u(gen), 500).beta2_effective;
    ASSERT_GE(beta, 50.0);
    ASSERT_LE(beta, 5000.0);
    const double rel_v = dv(gen);
    EXPECT_GE(beta * rel_v * rel_v, 0.0);
  }
}

TEST(ValidateMode, Bounds) {
  EXPECT_NO_THROW(ValidateMode(SemiActiveDampingMode{500, 500}));
  EXPECT_THROW(ValidateMode(SemiActiveDampingMode{-1, 5}), ConfigError);
  EXPECT_THROW(ValidateMode(SemiActiveDampingMode{10, 5}), ConfigError);
  EXPECT_THROW(ValidateMode(ActiveForceMode{1, -1}), ConfigError);
}

}  // namespace
}  // namespace mr_isolator
