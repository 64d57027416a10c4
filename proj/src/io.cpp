#include "mr_isolator/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mr_isolator {
namespace {

std::string Fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
double NiceStep(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10 * mag;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string TrajectoryCsv(const Trajectory& trajectory) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const auto& r : trajectory) {
    for (double v : {r.t, r.z0, r.z1, r.z2, r.v1, r.v2, r.beta2_eff, r.u_extra, r.f1}) {
      out += FormatDouble(v);
      out += ',';
    }
    out += FormatDouble(r.f2);
    out += '\n';
  }
  return out;
}

std::string FrequencyResponseCsv(const std::vector<FrequencyResponse<double>>& rows) {
  std::string out = kFrequencyResponseHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += FormatDouble(r.omega) + ',' + FormatDouble(std::abs(r.h1)) + ',' +
           FormatDouble(std::arg(r.h1)) + ',' + FormatDouble(std::abs(r.h2)) + ',' +
           FormatDouble(std::arg(r.h2)) + '\n';
  }
  return out;
}

std::string HistoryCsv(const std::vector<double>& history) {
  std::string out = "iteration,best_objective\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    out += std::to_string(i) + ',' + FormatDouble(history[i]) + '\n';
  }
  return out;
}

Trajectory ParseTrajectoryCsv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw std::runtime_error("trajectory CSV: unexpected header");
  }
  Trajectory rows;
  while (std::getline(in, line)) {
    double v[10];
    std::size_t pos = 0;
    for (int i = 0; i < 10; ++i) {
      const std::size_t end = line.find(',', pos);
      if ((i < 9) == (end == std::string::npos)) {
        throw std::runtime_error("trajectory CSV: expected 10 fields in row " +
                                 std::to_string(rows.size() + 1));
      }
      v[i] = std::stod(line.substr(pos, end - pos));
      pos = end + 1;
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]});
  }
  return rows;
}

nlohmann::json ToJson(const Metrics& m) {
  return {{"iae", m.iae},
          {"rms_z2", m.rms_z2},
          {"peak_abs_z2", m.peak_abs_z2},
          {"iae_raw_sum", m.iae_raw_sum}};
}

nlohmann::json ToJson(const ComparisonReport& report) {
  nlohmann::json j = {{"passive", ToJson(report.passive)}, {"active", ToJson(report.active)}};
  j["reduction_ratio"] =
      report.reduction_ratio ? nlohmann::json(*report.reduction_ratio) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json ToJson(const TuneResult& result) {
  return {{"best_gains",
           {{"kp", result.best_gains(0)}, {"ki", result.best_gains(1)}, {"kd", result.best_gains(2)}}},
          {"best_objective", result.best_objective},
          {"eval_count", result.eval_count},
          {"history", result.history}};
}

std::string SvgLineChart(const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double kWidth = 800, kHeight = 450;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    for (double v : s.x) x_min = std::min(x_min, v), x_max = std::max(x_max, v);
    for (double v : s.y) y_min = std::min(y_min, v), y_max = std::max(y_max, v);
  }
  if (!(x_max > x_min)) x_min = 0, x_max = 1;
  if (!(y_max > y_min)) {
    const double pad = std::max(1e-12, std::abs(y_min));
    y_min -= pad;
    y_max += pad;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << Escape(title) << "</text>\n";

  const double x_step = NiceStep(x_max - x_min, 8);
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9 * x_step; x += x_step) {
    const std::string p = Fixed(px(x), 2);
    svg << "<line x1=\"" << p << "\" y1=\"" << kTop << "\" x2=\"" << p << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << p << "\" y=\"" << kTop + plot_h + 16
        << "\" text-anchor=\"middle\">" << FormatDouble(std::round(x / x_step) * x_step)
        << "</text>\n";
  }
  const double y_step = NiceStep(y_max - y_min, 6);
  for (double y = std::ceil(y_min / y_step) * y_step; y <= y_max + 1e-9 * y_step; y += y_step) {
    const std::string p = Fixed(py(y), 2);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << p << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << p << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << p << "\" text-anchor=\"end\">"
        << FormatDouble(std::round(y / y_step) * y_step) << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << Escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(16," << kTop + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << Escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (k) svg << ' ';
      svg << Fixed(px(s.x[k]), 2) << ',' << Fixed(py(s.y[k]), 2);
    }
    svg << "\"/>\n";
    const double ly = kTop + 14 + 16 * static_cast<double>(i);
    svg << "<line x1=\"" << kLeft + plot_w - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kLeft + plot_w - 128 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w - 122 << "\" y=\"" << ly << "\">" << Escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void WriteFilesAtomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  try {
    for (const auto& [path, content] : files) {
      std::filesystem::path tmp = path;
      tmp += ".tmp";
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      std::filesystem::rename(temps[i], files[i].first);
    }
  } catch (...) {
    std::error_code ignored;
    for (const auto& tmp : temps) std::filesystem::remove(tmp, ignored);
    throw;
  }
}

}  // namespace mr_isolator
