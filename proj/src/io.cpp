#include "opclim/io.hpp"

#include <cstdio>

namespace opclim {

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

constexpr const char* kSeriesHeader =
    "year,mean_opinion,emissions_model,emissions_display,carbon,anomaly,response\n";

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_timeseries_csv(std::ostream& out, const TimeSeries& s) {
  out << kSeriesHeader;
  for (std::size_t t = 0; t < s.size(); ++t) {
    out << s.years[t] << ',' << format_number(s.mean_opinion[t]) << ','
        << format_number(s.emissions_model[t]) << ',' << format_number(s.emissions_display[t]) << ','
        << format_number(s.carbon[t]) << ',' << format_number(s.anomaly[t]) << ','
        << format_number(s.response[t]) << '\n';
  }
}

void write_replicate_summary_csv(std::ostream& out, const ReplicateSummary& s, bool write_std) {
  const auto pick = [&](const SeriesStats& st, std::size_t t) {
    return format_number(write_std ? st.std[t] : st.mean[t]);
  };
  out << kSeriesHeader;
  for (std::size_t t = 0; t < s.years.size(); ++t) {
    out << s.years[t] << ',' << pick(s.mean_opinion, t) << ',' << pick(s.emissions_model, t) << ','
        << pick(s.emissions_display, t) << ',' << pick(s.carbon, t) << ',' << pick(s.anomaly, t)
        << ',' << pick(s.response, t) << '\n';
  }
}

void write_snapshots_csv(std::ostream& out, const TimeSeries& s) {
  out << "year,bin_left,bin_right,fraction\n";
  const double width = 2.0 / kHistogramBins;
  for (const auto& snap : s.snapshots) {
    for (int b = 0; b < kHistogramBins; ++b) {
      out << snap.year << ',' << format_number(-1.0 + b * width) << ','
          << format_number(-1.0 + (b + 1) * width) << ',' << format_number(snap.fractions[b]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, std::span<const RunSummary> summaries,
                       std::span<const std::uint64_t> seeds) {
  out << "replicate,seed," << summary_csv_header() << '\n';
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    out << i << ',' << (i < seeds.size() ? seeds[i] : 0) << ',' << summary_csv_row(summaries[i]) << '\n';
  }
}

void write_sweep_long_csv(std::ostream& out, const SweepResult& r) {
  out << "cell,x_parameter,x,y_parameter,y,metric,mean,std,n,status,diagnostic\n";
  const bool two = r.axes.size() == 2;
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    const auto& cell = r.cells[c];
    for (std::size_t m = 0; m < r.metrics.size(); ++m) {
      const auto& st = cell.stats[m];
      out << c << ',' << r.axes[0].parameter << ',' << format_number(cell.coords[0]) << ','
          << (two ? r.axes[1].parameter : "") << ',' << (two ? format_number(cell.coords[1]) : "")
          << ',' << metric_name(r.metrics[m]) << ',' << format_number(st.mean) << ','
          << format_number(st.std) << ',' << st.n << ',' << (cell.failed ? "failed" : "ok") << ','
          << quote(cell.diagnostic) << '\n';
    }
  }
}

void write_heatmap_csv(std::ostream& out, const SweepResult& r, Metric metric) {
  const std::size_t m = r.metric_index(metric);
  const auto& xs = r.axis_values[0];
  const bool two = r.axes.size() == 2;
  out << (two ? r.axes[1].parameter + "\\" + r.axes[0].parameter : r.axes[0].parameter);
  for (const double x : xs) out << ',' << format_number(x);
  out << '\n';
  if (!two) {
    out << metric_name(metric);
    for (std::size_t i = 0; i < xs.size(); ++i) out << ',' << format_number(r.cells[i].stats[m].mean);
    out << '\n';
    return;
  }
  const auto& ys = r.axis_values[1];
  for (std::size_t j = 0; j < ys.size(); ++j) {
    out << format_number(ys[j]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << ',' << format_number(r.cells[i * ys.size() + j].stats[m].mean);
    }
    out << '\n';
  }
}

void write_calibration_trace_csv(std::ostream& out, const CalibrationResult& r) {
  out << "index,level,m_cost,r_max,alpha,mean_peak_year,error,status\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& p = r.trace[i];
    out << i << ',' << p.level << ',' << format_number(p.m_cost) << ',' << format_number(p.r_max)
        << ',' << format_number(p.alpha) << ',' << format_number(p.mean_peak_year) << ','
        << format_number(p.error) << ',' << (p.failed ? "failed" : "ok") << '\n';
  }
}

}  // namespace opclim
