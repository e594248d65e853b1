#include "opclim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opclim/io.hpp"

namespace opclim {

double bimodality_coefficient(std::span<const double> samples) {
  const std::size_t count = samples.size();
  if (count < 4) throw std::invalid_argument("bimodality_coefficient: need at least 4 samples");
  const auto n = static_cast<double>(count);

  double mean = 0.0;
  for (const double x : samples) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (const double x : samples) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 <= 0.0) throw DegenerateSample("bimodality_coefficient: sample has zero variance");

  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  const double skew = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  const double kurt = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
  const double finite_n = 3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
  return (skew * skew + 1.0) / (kurt + finite_n);
}

int peak_emission_year(std::span<const int> years, std::span<const double> emissions) {
  if (years.empty() || years.size() != emissions.size()) {
    throw std::invalid_argument("peak_emission_year: empty or mismatched series");
  }
  std::size_t best = 0;
  for (std::size_t t = 1; t < emissions.size(); ++t) {
    if (emissions[t] > emissions[best]) best = t;
  }
  return years[best];
}

int peak_emission_year(const TimeSeries& series) {
  return peak_emission_year(series.years, series.emissions_model);
}

RunSummary summarize(const TimeSeries& series, double strong_threshold) {
  if (series.size() == 0 || series.snapshots.empty()) {
    throw std::invalid_argument("summarize: empty series");
  }
  RunSummary s;
  const auto& final_opinions = series.final_snapshot().opinions;
  s.mean_opinion_final = series.mean_opinion.back();
  s.peak_anomaly = *std::max_element(series.anomaly.begin(), series.anomaly.end());
  s.peak_emission_year = peak_emission_year(series);
  if (final_opinions.size() >= 4) {
    try {
      s.bc_final = bimodality_coefficient(final_opinions);
    } catch (const DegenerateSample&) {
      s.bc_final.reset();
    }
  }
  std::size_t strong_pos = 0, strong_neg = 0;
  for (const double o : final_opinions) {
    strong_pos += o > strong_threshold;
    strong_neg += o < -strong_threshold;
  }
  const auto n = static_cast<double>(final_opinions.size());
  s.frac_strong_mitigative = n > 0 ? static_cast<double>(strong_pos) / n : 0.0;
  s.frac_strong_nonmitigative = n > 0 ? static_cast<double>(strong_neg) / n : 0.0;
  return s;
}

std::string summary_csv_header() {
  return "mean_opinion_final,peak_anomaly,peak_emission_year,bc_final,frac_strong_mitigative,"
         "frac_strong_nonmitigative";
}

std::string summary_csv_row(const RunSummary& s) {
  return format_number(s.mean_opinion_final) + "," + format_number(s.peak_anomaly) + "," +
         std::to_string(s.peak_emission_year) + "," +
         (s.bc_final ? format_number(*s.bc_final) : std::string("nan")) + "," +
         format_number(s.frac_strong_mitigative) + "," + format_number(s.frac_strong_nonmitigative);
}

}  // namespace opclim
