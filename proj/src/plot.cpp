#include "opclim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace opclim {

namespace {

constexpr double kWidth = 640, kHeight = 360;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

// Draws one chart at vertical offset `y0` into `svg`.
void chart(std::ostringstream& svg, double y0, const std::string& title, const std::string& x_label,
           const std::string& y_label, std::span<const LineSeries> series) {
  Range xr, yr;
  for (const auto& s : series) {
    for (const double v : s.x) xr.add(v);
    for (const double v : s.y) yr.add(v);
  }
  xr.finish();
  yr.finish();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return y0 + kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  svg << "<text x='" << kWidth / 2 << "' y='" << y0 + 22 << "' text-anchor='middle' font-size='15'>"
      << escape(title) << "</text>\n";
  svg << "<rect x='" << kLeft << "' y='" << y0 + kTop << "' width='" << pw << "' height='" << ph
      << "' fill='none' stroke='#333'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4, yv = yr.lo + (yr.hi - yr.lo) * i / 4;
    svg << "<text x='" << px(xv) << "' y='" << y0 + kTop + ph + 16
        << "' text-anchor='middle' font-size='11'>" << fmt(xv) << "</text>\n";
    svg << "<text x='" << kLeft - 6 << "' y='" << py(yv) + 4 << "' text-anchor='end' font-size='11'>"
        << fmt(yv) << "</text>\n";
  }
  svg << "<text x='" << kLeft + pw / 2 << "' y='" << y0 + kHeight - 10
      << "' text-anchor='middle' font-size='12'>" << escape(x_label) << "</text>\n";
  svg << "<text transform='translate(16," << y0 + kTop + ph / 2
      << ") rotate(-90)' text-anchor='middle' font-size='12'>" << escape(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill='none' stroke='" << colour << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (std::isfinite(s.y[i])) svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    svg << "'/>\n";
    if (!s.label.empty()) {
      svg << "<text x='" << kLeft + 8 << "' y='" << y0 + kTop + 14 + 14 * k << "' font-size='11' fill='"
          << colour << "'>" << escape(s.label) << "</text>\n";
    }
  }
}

std::string open_svg(double height) {
  std::ostringstream s;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << height
    << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";
  return s.str();
}

std::vector<double> to_double(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Sequential blue-to-red colour for t in [0, 1].
std::string colour_ramp(double t) {
  if (!std::isfinite(t)) return "#bbbbbb";
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(49 + t * (215 - 49));
  const int g = static_cast<int>(54 + (1.0 - std::abs(2.0 * t - 1.0)) * (220 - 54));
  const int b = static_cast<int>(149 + t * (39 - 149));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const LineSeries> series) {
  std::ostringstream svg;
  svg << open_svg(kHeight);
  chart(svg, 0, title, x_label, y_label, series);
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_timeseries(const TimeSeries& s) {
  const auto x = to_double(s.years);
  std::ostringstream svg;
  svg << open_svg(3 * kHeight);
  const LineSeries opinion[] = {{"", x, s.mean_opinion}};
  const LineSeries emissions[] = {{"", x, s.emissions_display}};
  const LineSeries anomaly[] = {{"", x, s.anomaly}};
  chart(svg, 0, "Mean opinion", "year", "mean opinion", opinion);
  chart(svg, kHeight, "Emissions", "year", "GtCO2/yr", emissions);
  chart(svg, 2 * kHeight, "Temperature anomaly", "year", "degC", anomaly);
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_sweep(const SweepResult& r, Metric metric) {
  const std::size_t m = r.metric_index(metric);
  const std::string name(metric_name(metric));
  if (r.axes.size() == 1) {
    LineSeries mean{"mean", r.axis_values[0], {}}, lo{"mean - std", r.axis_values[0], {}},
        hi{"mean + std", r.axis_values[0], {}};
    for (const auto& cell : r.cells) {
      const auto& st = cell.stats[m];
      mean.y.push_back(st.mean);
      lo.y.push_back(st.mean - st.std);
      hi.y.push_back(st.mean + st.std);
    }
    const LineSeries all[] = {mean, lo, hi};
    return svg_line_chart(name + " vs " + r.axes[0].parameter, r.axes[0].parameter, name, all);
  }

  const auto& xs = r.axis_values[0];
  const auto& ys = r.axis_values[1];
  Range vr;
  for (const auto& cell : r.cells) vr.add(cell.stats[m].mean);
  vr.finish();
  const double pw = kWidth - kLeft - kRight - 60, ph = kHeight - kTop - kBottom;
  const double cw = pw / xs.size(), ch = ph / ys.size();
  std::ostringstream svg;
  svg << open_svg(kHeight);
  svg << "<text x='" << kWidth / 2 << "' y='22' text-anchor='middle' font-size='15'>" << escape(name)
      << "</text>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double v = r.cells[i * ys.size() + j].stats[m].mean;
      svg << "<rect x='" << kLeft + i * cw << "' y='" << kTop + ph - (j + 1) * ch << "' width='" << cw + 0.5
          << "' height='" << ch + 0.5 << "' fill='" << colour_ramp((v - vr.lo) / (vr.hi - vr.lo))
          << "'><title>" << fmt(xs[i]) << ", " << fmt(ys[j]) << ": " << fmt(v) << "</title></rect>\n";
    }
  }
  svg << "<text x='" << kLeft + pw / 2 << "' y='" << kHeight - 10 << "' text-anchor='middle' font-size='12'>"
      << escape(r.axes[0].parameter) << " (" << fmt(xs.front()) << " to " << fmt(xs.back()) << ")</text>\n";
  svg << "<text transform='translate(16," << kTop + ph / 2 << ") rotate(-90)' text-anchor='middle' font-size='12'>"
      << escape(r.axes[1].parameter) << " (" << fmt(ys.front()) << " to " << fmt(ys.back()) << ")</text>\n";
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    svg << "<rect x='" << kWidth - kRight - 40 << "' y='" << kTop + ph - (k + 1) * ph / 11 << "' width='20' height='"
        << ph / 11 + 0.5 << "' fill='" << colour_ramp(t) << "'/>\n";
  }
  svg << "<text x='" << kWidth - kRight - 30 << "' y='" << kTop - 4 << "' text-anchor='middle' font-size='10'>"
      << fmt(vr.hi) << "</text>\n";
  svg << "<text x='" << kWidth - kRight - 30 << "' y='" << kTop + ph + 14
      << "' text-anchor='middle' font-size='10'>" << fmt(vr.lo) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace opclim
