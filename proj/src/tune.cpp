#include "mr_isolator/tune.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "mr_isolator/errors.hpp"
#include "mr_isolator/parallel.hpp"

namespace mr_isolator {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kGainNames[] = {"kp", "ki", "kd"};

void Require(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw ConfigError("tune." + key + ": " + rule);
}

struct Vertex {
  Eigen::Vector3d y;  // normalized coordinates in [0, 1]^3
  double f;
};

// Nelder-Mead state over the unit cube; maps to gains through the box.
class Search {
 public:
  Search(const SimConfig& sim, const TuneConfig& cfg, std::size_t workers)
      : sim_(sim), cfg_(cfg), workers_(workers), span_(cfg.upper - cfg.lower) {}

  Gains ToGains(const Eigen::Vector3d& y) const {
    return ProjectToBox(cfg_.lower + y.cwiseProduct(span_), cfg_);
  }

  std::vector<double> EvaluateAll(const std::vector<Eigen::Vector3d>& points) {
    eval_count_ += static_cast<int>(points.size());
    restart_evals_ += static_cast<int>(points.size());
    return ParallelMap<double>(points.size(), workers_, [&](std::size_t i) {
      return EvaluateGains(sim_, ToGains(points[i]), cfg_.objective);
    });
  }

  double Evaluate(const Eigen::Vector3d& y) { return EvaluateAll({y}).front(); }

  void Record(double f, const Eigen::Vector3d& y) {
    if (f < best_f_) {
      best_f_ = f;
      best_y_ = y;
    }
  }

  void RunRestart(const Eigen::Vector3d& start) {
    const auto& nm = cfg_.optimizer;
    restart_evals_ = 0;

    std::vector<Eigen::Vector3d> init{start};
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d v = start;
      v(i) += v(i) + nm.initial_simplex_scale <= 1.0 ? nm.initial_simplex_scale
                                                     : -nm.initial_simplex_scale;
      init.push_back(Clamp(v));
    }
    const std::vector<double> f0 = EvaluateAll(init);
    std::vector<Vertex> simplex;
    for (std::size_t i = 0; i < init.size(); ++i) simplex.push_back({init[i], f0[i]});
    Order(simplex);
    for (const auto& v : simplex) Record(v.f, v.y);
    history_.push_back(best_f_);

    while (restart_evals_ < nm.max_evals && !Converged(simplex)) {
      Iterate(simplex);
      Order(simplex);
      for (const auto& v : simplex) Record(v.f, v.y);
      history_.push_back(best_f_);
    }
  }

  double best_f() const { return best_f_; }
  const Eigen::Vector3d& best_y() const { return best_y_; }
  int eval_count() const { return eval_count_; }
  std::vector<double>& history() { return history_; }

 private:
  static Eigen::Vector3d Clamp(const Eigen::Vector3d& y) {
    return y.cwiseMax(0.0).cwiseMin(1.0);
  }

  // Ascending by value; ties keep their previous order.
  static void Order(std::vector<Vertex>& simplex) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  }

  bool Converged(const std::vector<Vertex>& simplex) const {
    const double best = simplex.front().f;
    const double worst = simplex.back().f;
    if (std::isfinite(worst) && worst - best <= cfg_.optimizer.tolerance * (1.0 + std::abs(best))) {
      return true;
    }
    double diameter = 0;
    for (const auto& v : simplex) {
      diameter = std::max(diameter, (v.y - simplex.front().y).lpNorm<Eigen::Infinity>());
    }
    return diameter < 1e-12;
  }

  void Iterate(std::vector<Vertex>& simplex) {
    const auto& nm = cfg_.optimizer;
    Vertex& worst = simplex.back();
    const double f_best = simplex.front().f;
    const double f_second = simplex[simplex.size() - 2].f;

    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i].y;
    centroid /= static_cast<double>(simplex.size() - 1);

    const Eigen::Vector3d yr = Clamp(centroid + nm.reflection * (centroid - worst.y));
    const double fr = Evaluate(yr);
    if (fr < f_best) {
      const Eigen::Vector3d ye = Clamp(centroid + nm.expansion * (yr - centroid));
      const double fe = Evaluate(ye);
      worst = fe < fr ? Vertex{ye, fe} : Vertex{yr, fr};
      return;
    }
    if (fr < f_second) {
      worst = {yr, fr};
      return;
    }
    if (fr < worst.f) {
      const Eigen::Vector3d yc = Clamp(centroid + nm.contraction * (yr - centroid));
      const double fc = Evaluate(yc);
      if (fc <= fr) {
        worst = {yc, fc};
        return;
      }
    } else {
      const Eigen::Vector3d yc = Clamp(centroid + nm.contraction * (worst.y - centroid));
      const double fc = Evaluate(yc);
      if (fc < worst.f) {
        worst = {yc, fc};
        return;
      }
    }
    std::vector<Eigen::Vector3d> shrunk;
    const Eigen::Vector3d anchor = simplex.front().y;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      shrunk.push_back(anchor + nm.shrink * (simplex[i].y - anchor));
    }
    const std::vector<double> fs = EvaluateAll(shrunk);
    for (std::size_t i = 1; i < simplex.size(); ++i) simplex[i] = {shrunk[i - 1], fs[i - 1]};
  }

  const SimConfig& sim_;
  const TuneConfig& cfg_;
  std::size_t workers_;
  Eigen::Vector3d span_;
  double best_f_{kInf};
  Eigen::Vector3d best_y_{Eigen::Vector3d::Zero()};
  int eval_count_{0};
  int restart_evals_{0};
  std::vector<double> history_;
};

}  // namespace

void TuneConfig::Validate() const {
  for (int i = 0; i < 3; ++i) {
    const std::string key = std::string("bounds.") + kGainNames[i];
    Require(std::isfinite(lower(i)) && lower(i) >= 0, key, "lower bound must be finite and >= 0");
    Require(std::isfinite(upper(i)) && upper(i) > lower(i), key,
            "upper bound must be finite and > lower bound");
  }
  const auto& nm = optimizer;
  Require(std::isfinite(nm.initial_simplex_scale) && nm.initial_simplex_scale > 0 &&
              nm.initial_simplex_scale <= 1,
          "optimizer.initial_simplex_scale", "must be in (0, 1]");
  Require(std::isfinite(nm.reflection) && nm.reflection > 0, "optimizer.reflection", "must be > 0");
  Require(std::isfinite(nm.expansion) && nm.expansion > 1, "optimizer.expansion", "must be > 1");
  Require(std::isfinite(nm.contraction) && nm.contraction > 0 && nm.contraction < 1,
          "optimizer.contraction", "must be in (0, 1)");
  Require(std::isfinite(nm.shrink) && nm.shrink > 0 && nm.shrink < 1, "optimizer.shrink",
          "must be in (0, 1)");
  Require(nm.max_evals >= 10, "optimizer.max_evals", "must be >= 10");
  Require(std::isfinite(nm.tolerance) && nm.tolerance >= 0, "optimizer.tolerance",
          "must be finite and >= 0");
  Require(restarts >= 1, "restarts", "must be >= 1");
}

Gains ProjectToBox(const Gains& gains, const TuneConfig& cfg) {
  return gains.cwiseMax(cfg.lower).cwiseMin(cfg.upper);
}

double EvaluateGains(const SimConfig& sim, const Gains& gains, TuneObjective objective) {
  SimConfig cfg = sim;
  cfg.pid.kp = gains(0);
  cfg.pid.ki = gains(1);
  cfg.pid.kd = gains(2);
  // Only the metrics are needed.
  cfg.record_every = static_cast<int>(std::min<std::int64_t>(
      std::numeric_limits<int>::max(), std::max<std::int64_t>(1, sim.StepCount() + 1)));
  try {
    const Metrics m = Run(cfg).metrics;
    switch (objective) {
      case TuneObjective::kIae:
        return m.iae;
      case TuneObjective::kRms:
        return m.rms_z2;
      case TuneObjective::kPeak:
        return m.peak_abs_z2;
    }
  } catch (const DivergenceError&) {
  } catch (const ControllerFault&) {
  }
  return kInf;
}

TuneResult Tune(const SimConfig& sim, const TuneConfig& cfg, std::size_t workers) {
  sim.Validate();
  cfg.Validate();
  if (IsPassive(sim.mode)) throw ConfigError("mode: tuning needs an active control mode");

  Search search(sim, cfg, workers);
  const Eigen::Vector3d span = cfg.upper - cfg.lower;
  const Gains initial = ProjectToBox(Gains(sim.pid.kp, sim.pid.ki, sim.pid.kd), cfg);
  std::mt19937_64 gen(cfg.seed);
  for (int r = 0; r < cfg.restarts; ++r) {
    Eigen::Vector3d start;
    if (r == 0) {
      start = (initial - cfg.lower).cwiseQuotient(span);
    } else {
      for (int i = 0; i < 3; ++i) start(i) = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    }
    search.RunRestart(start);
  }
  if (!std::isfinite(search.best_f())) {
    throw TuningFailedError("every objective evaluation diverged (" +
                            std::to_string(search.eval_count()) + " evaluations)");
  }

  TuneResult result;
  result.best_gains = search.ToGains(search.best_y());
  result.best_objective = EvaluateGains(sim, result.best_gains, cfg.objective);
  result.eval_count = search.eval_count();
  result.history = std::move(search.history());
  return result;
}

}  // namespace mr_isolator
