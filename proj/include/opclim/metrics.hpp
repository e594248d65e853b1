#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "opclim/engine.hpp"

namespace opclim {

// Thrown when a statistic is undefined for the sample (zero variance).
class DegenerateSample : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Sarle's bimodality coefficient
//
//   BC = (G1^2 + 1) / (G2 + 3 (n-1)^2 / ((n-2)(n-3)))
//
// with the bias-adjusted sample skewness and excess kurtosis
//
//   G1 = g1 sqrt(n (n-1)) / (n-2)
//   G2 = (n-1) / ((n-2)(n-3)) * ((n+1) g2 + 6)
//
// where g1 = m3 / m2^1.5 and g2 = m4 / m2^2 - 3 use central moments m_r
// about the sample mean with divisor n. Values above 5/9 (the uniform
// distribution's BC) suggest bimodality; the polarization threshold used
// throughout is 0.5. Requires n >= 4; throws DegenerateSample when every
// sample is equal.
double bimodality_coefficient(std::span<const double> samples);

// Year of the largest emissions_model value; ties go to the earliest year.
int peak_emission_year(const TimeSeries& series);
int peak_emission_year(std::span<const int> years, std::span<const double> emissions);

struct RunSummary {
  double mean_opinion_final = 0.0;
  double peak_anomaly = 0.0;
  int peak_emission_year = 0;
  std::optional<double> bc_final;  // empty when the final opinions are all equal
  double frac_strong_mitigative = 0.0;
  double frac_strong_nonmitigative = 0.0;
};

// Final-year fields come from the final snapshot; peak values from the
// whole series. Opinions above +threshold count as strongly mitigative,
// below -threshold as strongly non-mitigative.
RunSummary summarize(const TimeSeries& series, double strong_threshold = 2.0 / 3.0);

// Stable CSV layout: mean_opinion_final,peak_anomaly,peak_emission_year,
// bc_final,frac_strong_mitigative,frac_strong_nonmitigative. An undefined
// bc_final is written as "nan".
std::string summary_csv_header();
std::string summary_csv_row(const RunSummary& summary);

}  // namespace opclim
