#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "matchsim/report.hpp"

namespace matchsim {

namespace {

constexpr double kPanelWidth = 560;
constexpr double kPanelHeight = 400;
constexpr double kMarginLeft = 70;
constexpr double kMarginRight = 20;
constexpr double kMarginTop = 70;
constexpr double kMarginBottom = 55;
constexpr double kLegendWidth = 130;

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v, const char* fmt = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double key_value(const AggregateRow& row, PlotKey key) {
  return key == PlotKey::k ? static_cast<double>(row.k) : row.rho;
}

std::string key_label(PlotKey key, double value) {
  return (key == PlotKey::k ? "k = " : "rho = ") + num(value, "%g");
}

// Tick positions at 1, 2 or 5 times a power of ten, covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi, int target = 6) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (raw <= step) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

struct Axis {
  double lo, hi;
  bool log;

  double fraction(double v) const {
    if (log) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return (v - lo) / (hi - lo);
  }
};

}  // namespace

std::string render_plot(std::span<const AggregateRow> aggregates, const PlotSpec& spec) {
  if (spec.panel && *spec.panel == spec.series) {
    throw PlotError("panel key must differ from series key");
  }
  std::vector<AggregateRow> picked;
  for (const auto& row : aggregates) {
    if (spec.fix_k && row.k != *spec.fix_k) continue;
    if (spec.fix_rho && row.rho != *spec.fix_rho) continue;
    picked.push_back(row);
  }
  if (picked.empty()) throw PlotError("no series matched the plot selection");

  // panel value -> series value -> points (n, mean)
  std::map<double, std::map<double, std::vector<std::pair<double, double>>>> panels;
  for (const auto& row : picked) {
    const double panel = spec.panel ? key_value(row, *spec.panel) : 0.0;
    panels[panel][key_value(row, spec.series)].emplace_back(static_cast<double>(row.n),
                                                            row.mean_ratio);
  }
  std::vector<double> series_values;
  for (const auto& [_, series] : panels) {
    for (const auto& [value, __] : series) series_values.push_back(value);
  }
  std::sort(series_values.begin(), series_values.end());
  series_values.erase(std::unique(series_values.begin(), series_values.end()),
                      series_values.end());

  double x_lo = picked.front().n, x_hi = x_lo, y_max = 0.0, y_min_pos = 0.0;
  for (const auto& row : picked) {
    x_lo = std::min(x_lo, static_cast<double>(row.n));
    x_hi = std::max(x_hi, static_cast<double>(row.n));
    y_max = std::max(y_max, row.mean_ratio);
    if (row.mean_ratio > 0.0 && (y_min_pos == 0.0 || row.mean_ratio < y_min_pos)) {
      y_min_pos = row.mean_ratio;
    }
  }
  if (x_lo == x_hi) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  Axis x{x_lo, x_hi, false};
  Axis y{0.0, 1.0, spec.log_y};
  std::vector<double> y_ticks;
  if (spec.log_y) {
    // Zero means are drawn on the lower edge.
    const double floor_value = y_min_pos > 0.0 ? y_min_pos : 1e-4;
    const double top_value = y_max > 0.0 ? y_max : 1.0;
    y.lo = std::pow(10.0, std::floor(std::log10(floor_value)));
    y.hi = std::pow(10.0, std::ceil(std::log10(top_value)));
    if (y.hi <= y.lo) y.hi = y.lo * 10.0;
    for (double t = y.lo; t <= y.hi * 1.0000001; t *= 10.0) y_ticks.push_back(t);
  } else {
    y.hi = y_max > 0.0 ? y_max * 1.05 : 1.0;
    y_ticks = linear_ticks(0.0, y.hi);
  }
  const auto x_ticks = linear_ticks(x.lo, x.hi);

  const double plot_w = kPanelWidth - kMarginLeft - kMarginRight;
  const double plot_h = kPanelHeight - kMarginTop - kMarginBottom;
  const double width = kPanelWidth * static_cast<double>(panels.size()) + kLegendWidth;
  const double height = kPanelHeight;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width, "%.0f")
      << "\" height=\"" << num(height, "%.0f") << "\" viewBox=\"0 0 " << num(width, "%.0f") << ' '
      << num(height, "%.0f") << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(spec.title) << "</text>\n";

  std::size_t panel_index = 0;
  for (const auto& [panel_value, series] : panels) {
    const double ox = kPanelWidth * static_cast<double>(panel_index++) + kMarginLeft;
    const double oy = kMarginTop;
    auto px = [&](double v) { return ox + x.fraction(v) * plot_w; };
    auto py = [&](double v) {
      if (y.log) v = std::max(v, y.lo);
      return oy + (1.0 - y.fraction(v)) * plot_h;
    };

    svg << "<g>\n";
    if (spec.panel) {
      svg << "<text x=\"" << num(ox + plot_w / 2) << "\" y=\"" << num(oy - 12)
          << "\" text-anchor=\"middle\" font-size=\"13\">"
          << escape(key_label(*spec.panel, panel_value)) << "</text>\n";
    }
    svg << "<rect x=\"" << num(ox) << "\" y=\"" << num(oy) << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : x_ticks) {
      svg << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(oy + plot_h) << "\" x2=\""
          << num(px(t)) << "\" y2=\"" << num(oy + plot_h + 5) << "\" stroke=\"black\"/>"
          << "<text x=\"" << num(px(t)) << "\" y=\"" << num(oy + plot_h + 18)
          << "\" text-anchor=\"middle\">" << num(t, "%g") << "</text>\n";
    }
    for (double t : y_ticks) {
      svg << "<line x1=\"" << num(ox - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(ox)
          << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>"
          << "<text x=\"" << num(ox - 8) << "\" y=\"" << num(py(t) + 4)
          << "\" text-anchor=\"end\">" << num(t, "%g") << "</text>\n";
    }
    svg << "<text x=\"" << num(ox + plot_w / 2) << "\" y=\"" << num(oy + plot_h + 40)
        << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n"
        << "<text transform=\"translate(" << num(ox - 50) << ',' << num(oy + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

    for (const auto& [value, points] : series) {
      auto sorted = points;
      std::sort(sorted.begin(), sorted.end());
      const auto color_index = static_cast<std::size_t>(
          std::lower_bound(series_values.begin(), series_values.end(), value) -
          series_values.begin());
      svg << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\""
          << kPalette[color_index % kPalette.size()] << "\" points=\"";
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        svg << (i ? " " : "") << num(px(sorted[i].first)) << ',' << num(py(sorted[i].second));
      }
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }

  const double lx = kPanelWidth * static_cast<double>(panels.size()) + 10;
  svg << "<g>\n";
  for (std::size_t i = 0; i < series_values.size(); ++i) {
    const double ly = kMarginTop + 10 + 20 * static_cast<double>(i);
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24)
        << "\" y2=\"" << num(ly) << "\" stroke-width=\"2\" stroke=\""
        << kPalette[i % kPalette.size()] << "\"/>"
        << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4) << "\">"
        << escape(key_label(spec.series, series_values[i])) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace matchsim
