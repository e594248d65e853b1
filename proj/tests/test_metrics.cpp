#include <cmath>
#include <vector>

#include "doctest.h"
#include "opclim/engine.hpp"
#include "opclim/metrics.hpp"
#include "opclim/rng.hpp"

using namespace opclim;

namespace {

// Sarle's coefficient rebuilt from unbiased k-statistics over raw power sums,
// sharing no code with the library.
double bc_from_k_statistics(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  long double shift = x[0];
  for (double v : x) {
    const long double d = v - shift;
    s1 += d;
    s2 += d * d;
    s3 += d * d * d;
    s4 += d * d * d * d;
  }
  const long double k2 = (n * s2 - s1 * s1) / (n * (n - 1));
  const long double k3 = (2 * s1 * s1 * s1 - 3 * n * s1 * s2 + n * n * s3) / (n * (n - 1) * (n - 2));
  const long double k4 = (-6 * s1 * s1 * s1 * s1 + 12 * n * s1 * s1 * s2 - 3 * n * (n - 1) * s2 * s2 -
                          4 * n * (n + 1) * s1 * s3 + n * n * (n + 1) * s4) /
                         (n * (n - 1) * (n - 2) * (n - 3));
  const long double skew = k3 / std::pow(k2, 1.5L);
  const long double kurt = k4 / (k2 * k2);
  return static_cast<double>((skew * skew + 1) / (kurt + 3 * (n - 1) * (n - 1) / ((n - 2) * (n - 3))));
}

template <typename Draw>
std::vector<double> sample(std::size_t n, std::uint64_t seed, Draw draw) {
  SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = draw(rng);
  return out;
}

}  // namespace

TEST_CASE("bimodality coefficient against analytic values and an independent oracle") {
  const std::size_t n = 100000;
  const auto uniform = sample(n, 1, [](SplitMix64& r) { return 2.0 * uniform01(r) - 1.0; });
  const auto normal = sample(n, 2, [](SplitMix64& r) { return standard_normal(r); });
  const auto two_point = sample(n, 3, [](SplitMix64& r) { return uniform01(r) < 0.5 ? -1.0 : 1.0; });

  CHECK(std::abs(bimodality_coefficient(uniform) - 5.0 / 9.0) < 0.02);
  CHECK(std::abs(bimodality_coefficient(normal) - 1.0 / 3.0) < 0.02);
  CHECK(std::abs(bimodality_coefficient(two_point) - 1.0) < 0.02);

  for (const auto* s : {&uniform, &normal, &two_point}) {
    CHECK(bimodality_coefficient(*s) == doctest::Approx(bc_from_k_statistics(*s)).epsilon(1e-9));
  }
  // Small samples exercise the finite-n corrections.
  const auto small = sample(7, 4, [](SplitMix64& r) { return uniform01(r); });
  CHECK(bimodality_coefficient(small) == doctest::Approx(bc_from_k_statistics(small)).epsilon(1e-9));
}

TEST_CASE("bimodality coefficient is affine invariant") {
  const auto x = sample(1000, 9, [](SplitMix64& r) { return standard_normal(r) * standard_normal(r); });
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 * x[i] - 7.0;
  CHECK(bimodality_coefficient(y) == doctest::Approx(bimodality_coefficient(x)).epsilon(1e-10));
}

TEST_CASE("degenerate and short samples") {
  const std::vector<double> flat(100, 1.0);
  CHECK_THROWS_AS(bimodality_coefficient(flat), DegenerateSample);
  const std::vector<double> three{0.1, 0.2, 0.3};
  CHECK_THROWS_AS(bimodality_coefficient(three), std::invalid_argument);
}

TEST_CASE("peak emission year") {
  const std::vector<int> years{2022, 2023, 2024, 2025};
  CHECK(peak_emission_year(years, std::vector<double>{4.0, 3.0, 2.0, 1.0}) == 2022);
  CHECK(peak_emission_year(years, std::vector<double>{2.0, 2.0, 2.0, 2.0}) == 2022);
  CHECK(peak_emission_year(years, std::vector<double>{1.0, 3.0, 3.0, 2.0}) == 2023);
  CHECK(peak_emission_year(years, std::vector<double>{1.0, 2.0, 3.0, 4.0}) == 2025);
}

TEST_CASE("summary of a consensus run leaves BC undefined") {
  ScenarioConfig cfg;
  cfg.initial_opinion = AllFixed{1.0};
  cfg.params.noise_sigma = 0.0;
  cfg.params.death_rate = 0.0;
  const auto s = summarize(run_simulation(cfg));
  CHECK_FALSE(s.bc_final.has_value());
  CHECK(s.mean_opinion_final == 1.0);
  CHECK(s.frac_strong_mitigative == 1.0);
  CHECK(s.frac_strong_nonmitigative == 0.0);
  CHECK(s.peak_emission_year == 2022);
  CHECK(summary_csv_row(s).find(",nan,") != std::string::npos);
}
