#include "mr_isolator/tune.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace mr_isolator {
namespace {

SimConfig ActiveDefaults() {
  SimConfig sim;
  sim.mode = ActiveForceMode{-5e4, 5e4};
  sim.pid.output_min = -5e4;
  sim.pid.output_max = 5e4;
  return sim;
}

TEST(Tune, ZeroObjectiveReturnsInitialPoint) {
  SimConfig sim = ActiveDefaults();
  sim.excitation = Excitation(SineExcitation{0.0, 1.0, 0.0});
  sim.pid.kp = 1234;
  sim.pid.ki = 56;
  sim.pid.kd = 7.5;
  const TuneResult r = Tune(sim, TuneConfig{});
  EXPECT_EQ(r.best_objective, 0.0);
  EXPECT_NEAR(r.best_gains(0), 1234, 1e-9);
  EXPECT_NEAR(r.best_gains(1), 56, 1e-9);
  EXPECT_NEAR(r.best_gains(2), 7.5, 1e-9);
  // One simplex per restart, no iterations.
  EXPECT_EQ(r.eval_count, 4 * TuneConfig{}.restarts);
}

TEST(Tune, OneDimensionalBeatsGridSearch) {
  const SimConfig sim = ActiveDefaults();
  // Proportional-only IAE is unimodal on this window, with an interior minimum.
  TuneConfig cfg;
  cfg.lower = Gains(1e4, 0, 0);
  cfg.upper = Gains(2e4, 1e-9, 1e-9);
  cfg.restarts = 2;
  double grid_best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const double kp = cfg.lower(0) + (cfg.upper(0) - cfg.lower(0)) * i / 49.0;
    grid_best = std::min(grid_best, EvaluateGains(sim, Gains(kp, 0, 0), cfg.objective));
  }
  const TuneResult r = Tune(sim, cfg);
  EXPECT_LE(r.best_objective, grid_best * 1.01);
}

TEST(Tune, BeatsRandomSearch) {
  const SimConfig sim = ActiveDefaults();
  const TuneConfig cfg;
  const TuneResult r = Tune(sim, cfg);
  EXPECT_LE(r.best_objective, testing::RandomSearchBest(sim, cfg, 200, cfg.seed));
}

TEST(Tune, HistoryAndRestartInvariants) {
  SimConfig sim = ActiveDefaults();
  sim.pid.kp = 500;
  TuneConfig cfg;
  cfg.objective = TuneObjective::kRms;
  const TuneResult r = Tune(sim, cfg);
  ASSERT_FALSE(r.history.empty());
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    EXPECT_LE(r.history[i], r.history[i - 1]);
  }
  EXPECT_EQ(r.history.back(), r.best_objective);
  EXPECT_LE(r.best_objective, EvaluateGains(sim, Gains(500, 0, 0), cfg.objective));
  EXPECT_EQ(r.best_objective, EvaluateGains(sim, r.best_gains, cfg.objective));
  for (int i = 0; i < 3; ++i) {
    EXPECT_GE(r.best_gains(i), cfg.lower(i));
    EXPECT_LE(r.best_gains(i), cfg.upper(i));
  }
}

TEST(Tune, DeterministicAcrossWorkerCounts) {
  const SimConfig sim = ActiveDefaults();
  TuneConfig cfg;
  cfg.restarts = 2;
  cfg.objective = TuneObjective::kPeak;
  const TuneResult a = Tune(sim, cfg, 1);
  const TuneResult b = Tune(sim, cfg, 4);
  EXPECT_EQ(a.best_gains, b.best_gains);
  EXPECT_EQ(a.best_objective, b.best_objective);
  EXPECT_EQ(a.eval_count, b.eval_count);
  EXPECT_EQ(a.history, b.history);
}

TEST(Tune, AllDivergedFails) {
  SimConfig sim = ActiveDefaults();
  sim.plant.c1 = 1e12;
  sim.integrator.method = IntegrationMethod::kSemiImplicitEuler;
  TuneConfig cfg;
  cfg.restarts = 1;
  cfg.optimizer.max_evals = 10;
  EXPECT_THROW(Tune(sim, cfg), TuningFailedError);
}

TEST(Tune, RejectsPassiveAndBadConfig) {
  SimConfig sim;
  sim.mode = PassiveMode{};
  EXPECT_THROW(Tune(sim, TuneConfig{}), ConfigError);
  TuneConfig cfg;
  cfg.upper(1) = cfg.lower(1);
  EXPECT_THROW(Tune(ActiveDefaults(), cfg), ConfigError);
  cfg = {};
  cfg.optimizer.max_evals = 9;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = {};
  cfg.restarts = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST(ProjectToBox, ClampsExactly) {
  const TuneConfig cfg;
  const Gains g = ProjectToBox(Gains(-5, 2e5, 77), cfg);
  EXPECT_EQ(g(0), 0.0);
  EXPECT_EQ(g(1), cfg.upper(1));
  EXPECT_EQ(g(2), 77.0);
}

}  // namespace
}  // namespace mr_isolator
