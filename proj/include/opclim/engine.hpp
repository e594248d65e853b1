#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "opclim/params.hpp"

namespace opclim {

// A run produced NaN or infinity. The message names the year and quantity.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kHistogramBins = 40;
using OpinionHistogram = std::array<double, kHistogramBins>;

// Fractions of opinions in 40 equal bins over [-1, 1]; the last bin is
// closed on the right so +1 is counted.
OpinionHistogram opinion_histogram(std::span<const double> opinions);

struct Snapshot {
  int year = 0;
  std::vector<double> opinions;
  OpinionHistogram fractions{};
};

// One record per year, start_year through start_year + horizon_years.
// Row t holds the state at the start of year t: the mean opinion, the
// emissions it implies, carbon and anomaly, and the response R computed from
// that anomaly (the value used for the update from t to t+1).
// Carbon obeys carbon[t+1] = carbon[t] + emissions_model[t+1] - delta*carbon[t]
// while the zero floor is inactive.
struct TimeSeries {
  std::vector<int> years;
  std::vector<double> mean_opinion;
  std::vector<double> emissions_model;
  std::vector<double> emissions_display;
  std::vector<double> carbon;
  std::vector<double> anomaly;
  std::vector<double> response;
  // Configured snapshot years inside the horizon, plus the final year.
  std::vector<Snapshot> snapshots;
  double display_scale = 1.0;

  std::size_t size() const { return years.size(); }
  const Snapshot& final_snapshot() const { return snapshots.back(); }
  const Snapshot* snapshot_at(int year) const;

  bool operator==(const TimeSeries& other) const;
};

// Yearly loop: response from the start-of-year anomaly, synchronous opinion
// update (skipped when opinions are AllFixed), vital dynamics, carbon step
// with the updated mean opinion, temperature step with the new forcing.
// Deterministic in (config, config.seed); `threads` never changes the output.
TimeSeries run_simulation(const ScenarioConfig& config, int threads = 1);

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> std;  // population standard deviation (divides by n)
};

struct ReplicateSummary {
  std::vector<int> years;
  SeriesStats mean_opinion;
  SeriesStats emissions_model;
  SeriesStats emissions_display;
  SeriesStats carbon;
  SeriesStats anomaly;
  SeriesStats response;
};

ReplicateSummary summarize_replicates(std::span<const TimeSeries> runs);

struct ReplicateSet {
  std::vector<std::uint64_t> seeds;
  std::vector<TimeSeries> runs;
  ReplicateSummary summary;
};

// Replicate i runs with seed derive_run_seed(config.seed, i). Replicates run
// concurrently on up to `threads` threads.
ReplicateSet run_replicates(const ScenarioConfig& config, int n_replicates, int threads = 1);

}  // namespace opclim
