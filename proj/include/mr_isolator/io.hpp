#pragma once

// Output artifacts: CSV tables, JSON reports and SVG line charts.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mr_isolator/analysis.hpp"
#include "mr_isolator/simulate.hpp"
#include "mr_isolator/tune.hpp"

namespace mr_isolator {

/// 17 significant digits, enough to round-trip a double.
std::string FormatDouble(double value);

inline constexpr const char* kTrajectoryHeader = "t,z0,z1,z2,v1,v2,beta2_eff,u_extra,f1,f2";
inline constexpr const char* kFrequencyResponseHeader =
    "omega_rad_s,abs_h1,arg_h1,abs_h2,arg_h2";

std::string TrajectoryCsv(const Trajectory& trajectory);
std::string FrequencyResponseCsv(const std::vector<FrequencyResponse<double>>& rows);
std::string HistoryCsv(const std::vector<double>& history);

/// Parses a trajectory CSV produced by TrajectoryCsv. Throws
/// std::runtime_error on a malformed table.
Trajectory ParseTrajectoryCsv(const std::string& csv);

nlohmann::json ToJson(const Metrics& metrics);
nlohmann::json ToJson(const ComparisonReport& report);
nlohmann::json ToJson(const TuneResult& result);

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line chart with axes, tick labels and a legend.
std::string SvgLineChart(const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<PlotSeries>& series);

/// Writes every file to a temporary sibling first, then renames them into
/// place, so no target is left partially written.
void WriteFilesAtomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace mr_isolator
