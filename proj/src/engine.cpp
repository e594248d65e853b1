#include "opclim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "opclim/climate.hpp"
#include "opclim/coupling.hpp"
#include "opclim/opinion.hpp"
#include "opclim/parallel.hpp"
#include "opclim/rng.hpp"

namespace opclim {

namespace {

constexpr double kReportedInitialEmissions = 40.0;  // GtCO2/yr

void require_finite(double value, int year, const char* quantity) {
  if (!std::isfinite(value)) {
    throw NumericError("year " + std::to_string(year) + ": " + quantity + " is not finite (" +
                       std::to_string(value) + ")");
  }
}

SeriesStats stats_of(std::span<const TimeSeries> runs, std::vector<double> TimeSeries::*field) {
  const std::size_t len = (runs.front().*field).size();
  const auto n = static_cast<double>(runs.size());
  SeriesStats out{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const auto& r : runs) sum += (r.*field)[t];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : runs) ss += ((r.*field)[t] - mean) * ((r.*field)[t] - mean);
    out.mean[t] = mean;
    out.std[t] = std::sqrt(ss / n);
  }
  return out;
}

}  // namespace

OpinionHistogram opinion_histogram(std::span<const double> opinions) {
  OpinionHistogram h{};
  if (opinions.empty()) return h;
  for (const double o : opinions) {
    auto bin = static_cast<int>(std::floor((o + 1.0) / 2.0 * kHistogramBins));
    bin = std::clamp(bin, 0, kHistogramBins - 1);
    h[bin] += 1.0;
  }
  for (double& f : h) f /= static_cast<double>(opinions.size());
  return h;
}

const Snapshot* TimeSeries::snapshot_at(int year) const {
  const auto it = std::ranges::find(snapshots, year, &Snapshot::year);
  return it == snapshots.end() ? nullptr : &*it;
}

bool TimeSeries::operator==(const TimeSeries& o) const {
  if (snapshots.size() != o.snapshots.size()) return false;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    if (snapshots[i].year != o.snapshots[i].year || snapshots[i].opinions != o.snapshots[i].opinions)
      return false;
  }
  return years == o.years && mean_opinion == o.mean_opinion &&
         emissions_model == o.emissions_model && emissions_display == o.emissions_display &&
         carbon == o.carbon && anomaly == o.anomaly && response == o.response &&
         display_scale == o.display_scale;
}

TimeSeries run_simulation(const ScenarioConfig& config, int threads) {
  validate(config);
  const ModelParams& p = config.params;
  const std::uint64_t seed = config.seed;
  const ResponseParams response_params = ResponseParams::from(p);
  const bool pinned = std::holds_alternative<AllFixed>(config.initial_opinion);
  const int final_year = p.start_year + p.horizon_years;

  SplitMix64 init_rng(stream_seed(seed, StreamPurpose::init, 0, 0));
  Population population = init_population(config, init_rng);
  ClimateState climate = initial_climate(p);

  TimeSeries ts;
  const auto rows = static_cast<std::size_t>(p.horizon_years) + 1;
  for (auto* v : {&ts.mean_opinion, &ts.emissions_model, &ts.emissions_display, &ts.carbon,
                  &ts.anomaly, &ts.response}) {
    v->reserve(rows);
  }
  ts.years.reserve(rows);

  const auto record = [&](int year) {
    const double mean = mean_opinion(population);
    const double anomaly = total_anomaly(climate);
    const double response = temperature_response(anomaly, response_params);
    require_finite(mean, year, "mean opinion");
    require_finite(climate.carbon, year, "carbon stock");
    require_finite(climate.t_deep, year, "deep-ocean temperature");
    require_finite(climate.t_upper, year, "upper-ocean temperature");
    require_finite(response, year, "temperature response");
    ts.years.push_back(year);
    ts.mean_opinion.push_back(mean);
    ts.emissions_model.push_back(emission_rate(mean, p.e0));
    ts.carbon.push_back(climate.carbon);
    ts.anomaly.push_back(anomaly);
    ts.response.push_back(response);
    const bool wanted = year == final_year || std::ranges::find(config.snapshot_years, year) !=
                                                  config.snapshot_years.end();
    if (wanted) {
      Snapshot snap;
      snap.year = year;
      snap.opinions.reserve(population.size());
      for (const auto& a : population) snap.opinions.push_back(a.opinion);
      snap.fractions = opinion_histogram(snap.opinions);
      ts.snapshots.push_back(std::move(snap));
    }
  };

  record(p.start_year);
  for (int step = 0; step < p.horizon_years; ++step) {
    const int year = p.start_year + step;
    const double response = ts.response.back();
    if (!pinned) {
      const auto next = update_opinions(population, response, p, seed, step, threads);
      for (std::size_t i = 0; i < population.size(); ++i) population[i].opinion = next[i];
      SplitMix64 vital_rng(stream_seed(seed, StreamPurpose::vital, static_cast<std::uint64_t>(step), 0));
      vital_dynamics(population, p, vital_rng);
    }
    climate.carbon = step_carbon(climate.carbon, mean_opinion(population), p);
    require_finite(climate.carbon, year + 1, "carbon stock");
    climate = step_temperature(climate, radiative_forcing(climate.carbon, p), p);
    record(year + 1);
  }

  const double initial = ts.emissions_model.front();
  if (p.emission_display_scale) {
    ts.display_scale = *p.emission_display_scale;
  } else {
    ts.display_scale = initial > 0.0 ? kReportedInitialEmissions / initial : 1.0;
  }
  ts.emissions_display.reserve(rows);
  for (const double e : ts.emissions_model) ts.emissions_display.push_back(e * ts.display_scale);
  return ts;
}

ReplicateSummary summarize_replicates(std::span<const TimeSeries> runs) {
  if (runs.empty()) throw std::invalid_argument("summarize_replicates: no runs");
  ReplicateSummary s;
  s.years = runs.front().years;
  s.mean_opinion = stats_of(runs, &TimeSeries::mean_opinion);
  s.emissions_model = stats_of(runs, &TimeSeries::emissions_model);
  s.emissions_display = stats_of(runs, &TimeSeries::emissions_display);
  s.carbon = stats_of(runs, &TimeSeries::carbon);
  s.anomaly = stats_of(runs, &TimeSeries::anomaly);
  s.response = stats_of(runs, &TimeSeries::response);
  return s;
}

ReplicateSet run_replicates(const ScenarioConfig& config, int n_replicates, int threads) {
  if (n_replicates < 1) throw std::invalid_argument("run_replicates: n_replicates must be >= 1");
  validate(config);
  ReplicateSet set;
  const auto n = static_cast<std::size_t>(n_replicates);
  set.seeds.resize(n);
  set.runs.resize(n);
  for (std::size_t i = 0; i < n; ++i) set.seeds[i] = derive_run_seed(config.seed, i);
  parallel_for_each_index(n, threads, [&](std::size_t i) {
    ScenarioConfig run_config = config;
    run_config.seed = set.seeds[i];
    set.runs[i] = run_simulation(run_config, 1);
  });
  set.summary = summarize_replicates(set.runs);
  return set;
}

}  // namespace opclim
