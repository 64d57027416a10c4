#include "mr_isolator/cli.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mr_isolator/analysis.hpp"
#include "mr_isolator/config.hpp"
#include "mr_isolator/errors.hpp"
#include "mr_isolator/io.hpp"
#include "mr_isolator/parallel.hpp"
#include "mr_isolator/simulate.hpp"
#include "mr_isolator/tune.hpp"

namespace mr_isolator {
namespace {

using nlohmann::json;
using Files = std::vector<std::pair<std::filesystem::path, std::string>>;

struct Options {
  std::string config;
  std::string out_prefix;
  bool plot{false};
  // analyze
  double f_lo{0.1};
  double f_hi{20};
  int points{200};
  // sweep
  std::string param;
  std::string values;
  // tune
  std::string emit_config;
};

std::filesystem::path WithSuffix(const std::string& prefix, const std::string& suffix) {
  return prefix + suffix;
}

json LoadRaw(const Options& opt) {
  return opt.config.empty() ? json::object() : ReadJsonFile(opt.config);
}

PlotSeries Column(const Trajectory& tr, double TrajectoryRow::*field, std::string label,
                  std::string color) {
  PlotSeries s{std::move(label), std::move(color), {}, {}};
  for (const auto& r : tr) {
    s.x.push_back(r.t);
    s.y.push_back(r.*field);
  }
  return s;
}

void Simulate(const Options& opt) {
  const ConfigDocument doc = ParseConfig(LoadRaw(opt));
  const RunResult result = Run(doc.sim);
  Files files{{WithSuffix(opt.out_prefix, ".trajectory.csv"), TrajectoryCsv(result.trajectory)},
              {WithSuffix(opt.out_prefix, ".metrics.json"), ToJson(result.metrics).dump(2) + "\n"}};
  if (opt.plot) {
    files.emplace_back(
        WithSuffix(opt.out_prefix, ".svg"),
        SvgLineChart("Displacement vs time", "t, s", "displacement",
                     {Column(result.trajectory, &TrajectoryRow::z0, "base z0", "#1f77b4"),
                      Column(result.trajectory, &TrajectoryRow::z2, "protected mass z2",
                             "#d62728")}));
  }
  WriteFilesAtomically(files);
}

void Compare(const Options& opt) {
  const ConfigDocument doc = ParseConfig(LoadRaw(opt));
  const ComparisonRuns runs = CompareRuns(doc.sim, doc.sim.mode, doc.sim.pid);
  Files files{
      {WithSuffix(opt.out_prefix, ".passive.trajectory.csv"), TrajectoryCsv(runs.passive.trajectory)},
      {WithSuffix(opt.out_prefix, ".active.trajectory.csv"), TrajectoryCsv(runs.active.trajectory)},
      {WithSuffix(opt.out_prefix, ".report.json"), ToJson(runs.report).dump(2) + "\n"}};
  if (opt.plot) {
    files.emplace_back(
        WithSuffix(opt.out_prefix, ".svg"),
        SvgLineChart("Passive vs active", "t, s", "displacement",
                     {Column(runs.passive.trajectory, &TrajectoryRow::z0, "base z0", "#1f77b4"),
                      Column(runs.passive.trajectory, &TrajectoryRow::z2, "z2 passive", "#ff7f0e"),
                      Column(runs.active.trajectory, &TrajectoryRow::z2, "z2 active", "#2ca02c")}));
  }
  WriteFilesAtomically(files);
}

void TuneGains(const Options& opt) {
  ConfigDocument doc = ParseConfig(LoadRaw(opt));
  const TuneConfig cfg = doc.tune.value_or(TuneConfig{});
  const TuneResult result = Tune(doc.sim, cfg, WorkerCount());
  Files files{{WithSuffix(opt.out_prefix, ".tune.json"), ToJson(result).dump(2) + "\n"},
              {WithSuffix(opt.out_prefix, ".history.csv"), HistoryCsv(result.history)}};
  if (!opt.emit_config.empty()) {
    doc.sim.pid.kp = result.best_gains(0);
    doc.sim.pid.ki = result.best_gains(1);
    doc.sim.pid.kd = result.best_gains(2);
    doc.tune = cfg;
    files.emplace_back(opt.emit_config, ToJson(doc).dump(2) + "\n");
  }
  WriteFilesAtomically(files);
}

void Analyze(const Options& opt) {
  const ConfigDocument doc = ParseConfig(LoadRaw(opt));
  if (!(std::isfinite(opt.f_lo) && opt.f_lo > 0)) throw ConfigError("--f-lo: must be > 0");
  if (!(std::isfinite(opt.f_hi) && opt.f_hi >= opt.f_lo)) {
    throw ConfigError("--f-hi: must be >= --f-lo");
  }
  if (opt.points < 1) throw ConfigError("--points: must be >= 1");
  std::vector<FrequencyResponse<double>> rows;
  for (int i = 0; i < opt.points; ++i) {
    // Log-spaced in frequency.
    const double frac = opt.points == 1 ? 0.0 : static_cast<double>(i) / (opt.points - 1);
    const double f = opt.f_lo * std::pow(opt.f_hi / opt.f_lo, frac);
    rows.push_back(Transmissibility(doc.sim.plant, 2.0 * std::numbers::pi * f));
  }
  WriteFilesAtomically(
      {{WithSuffix(opt.out_prefix, ".frequency_response.csv"), FrequencyResponseCsv(rows)}});
}

// Numeric literal as JSON, keeping integers integral so integer keys accept it.
json ParseValue(const std::string& text) {
  std::size_t pos = 0;
  try {
    if (text.find_first_of(".eEnN") == std::string::npos) {
      const long long n = std::stoll(text, &pos);
      if (pos == text.size()) return n;
    }
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("--values: '" + text + "' is not a number");
}

void Sweep(const Options& opt) {
  if (opt.param.empty()) throw ConfigError("--param: required");
  std::vector<std::string> texts;
  std::stringstream ss(opt.values);
  for (std::string item; std::getline(ss, item, ',');) texts.push_back(item);
  if (texts.empty()) throw ConfigError("--values: need at least one value");

  const json raw = LoadRaw(opt);
  std::string pointer = "/" + opt.param;
  std::replace(pointer.begin(), pointer.end(), '.', '/');
  std::vector<SimConfig> configs;
  for (const auto& text : texts) {
    json doc = raw;
    doc[json::json_pointer(pointer)] = ParseValue(text);
    configs.push_back(ParseConfig(doc).sim);
  }
  const auto metrics = ParallelMap<Metrics>(configs.size(), WorkerCount(), [&](std::size_t i) {
    return Run(configs[i]).metrics;
  });
  std::string csv = "value,iae,rms_z2,peak_abs_z2,iae_raw_sum\n";
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto& m = metrics[i];
    csv += texts[i] + ',' + FormatDouble(m.iae) + ',' + FormatDouble(m.rms_z2) + ',' +
           FormatDouble(m.peak_abs_z2) + ',' + FormatDouble(m.iae_raw_sum) + '\n';
  }
  WriteFilesAtomically({{WithSuffix(opt.out_prefix, ".sweep.csv"), csv}});
}

}  // namespace

int CliMain(const std::vector<std::string>& args) {
  CLI::App app{"Two-mass vibration isolator with a controllable damper: simulation, "
               "passive/active comparison, PID tuning and frequency analysis"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON configuration file (defaults if omitted)");
    sub->add_option("--out-prefix", opt.out_prefix, "Prefix for output files")->required();
  };
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  common(simulate);
  simulate->add_flag("--plot", opt.plot, "Also write an SVG of z0 and z2");
  auto* compare = app.add_subcommand("compare", "Passive vs active on the same excitation");
  common(compare);
  compare->add_flag("--plot", opt.plot, "Also write an SVG of passive and active z2");
  auto* tune = app.add_subcommand("tune", "Optimize PID gains");
  common(tune);
  tune->add_option("--emit-config", opt.emit_config, "Write the config with tuned gains here");
  auto* analyze = app.add_subcommand("analyze", "Frequency response of the linear plant");
  common(analyze);
  analyze->add_option("--f-lo", opt.f_lo, "Lowest frequency, Hz");
  analyze->add_option("--f-hi", opt.f_hi, "Highest frequency, Hz");
  analyze->add_option("--points", opt.points, "Number of log-spaced frequencies");
  auto* sweep = app.add_subcommand("sweep", "One simulation per parameter value");
  common(sweep);
  sweep->add_option("--param", opt.param, "Dotted config key, e.g. plant.beta2_passive")
      ->required();
  sweep->add_option("--values", opt.values, "Comma-separated values")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cout, std::cerr);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) Simulate(opt);
    if (*compare) Compare(opt);
    if (*tune) TuneGains(opt);
    if (*analyze) Analyze(opt);
    if (*sweep) Sweep(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DivergenceError& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  } catch (const ControllerFault& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  } catch (const TuningFailedError& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace mr_isolator
