#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "opclim/metrics.hpp"
#include "opclim/params.hpp"

namespace opclim {

enum class Spacing { linear, log };

struct SweepAxis {
  std::string parameter;
  double min = 0.0;
  double max = 1.0;
  int n_points = 2;
  Spacing spacing = Spacing::linear;

  // Grid values; the endpoints are exactly min and max.
  std::vector<double> values() const;
  bool operator==(const SweepAxis&) const = default;
};

enum class Metric {
  mean_opinion_final,
  peak_anomaly,
  peak_emission_year,
  bc_final,
  frac_strong_mitigative,
  frac_strong_nonmitigative,
};

std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);  // throws ConfigError
const std::vector<Metric>& all_metrics();
// NaN when the metric is undefined for this run (bc_final of a consensus).
double metric_value(const RunSummary& summary, Metric metric);

struct SweepSpec {
  std::vector<SweepAxis> axes;  // one or two
  int replicates = 20;
  ScenarioConfig base;
  std::vector<Metric> metrics = all_metrics();
};

// Throws ConfigError naming the offending field.
void validate(const SweepSpec& spec);

// Mean and population std over the replicates where the metric is defined.
struct MetricStats {
  double mean = 0.0;
  double std = 0.0;
  int n = 0;

  bool operator==(const MetricStats&) const = default;
};

struct SweepCell {
  std::vector<std::size_t> index;  // per-axis grid index
  std::vector<double> coords;      // per-axis parameter value
  std::vector<MetricStats> stats;  // parallel to SweepResult::metrics
  bool failed = false;
  std::string diagnostic;

  bool operator==(const SweepCell&) const = default;
};

// Cells in row-major order: the last axis varies fastest.
struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<std::vector<double>> axis_values;
  std::vector<Metric> metrics;
  std::vector<SweepCell> cells;

  std::vector<std::size_t> shape() const;
  std::size_t metric_index(Metric metric) const;
  const MetricStats& stats(std::size_t cell, Metric metric) const;
  bool operator==(const SweepResult&) const = default;
};

struct SweepOptions {
  int threads = 1;
  // Optional permutation of cell indices giving the evaluation order. The
  // result does not depend on it.
  std::vector<std::size_t> evaluation_order;
};

// Every cell applies its coordinates as overrides to spec.base and runs
// spec.replicates replicates with seeds derive_run_seed(base.seed, r); the
// same seeds are reused in every cell. A cell whose overrides are invalid
// or whose run fails is marked failed and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

SweepResult univariate_noise_sweep(const ScenarioConfig& base, double sigma_min, double sigma_max,
                                   int n_points, int replicates, const SweepOptions& options = {});

// Reads the base config and its "sweep" block:
//   {"axes": [{"parameter", "min", "max", "n_points", "spacing"}], "replicates", "metrics"}
SweepSpec load_sweep_spec(std::string_view config_text);

// Search space for the emission-peak calibration, ordered (m_cost, r_max, alpha).
struct CalibrationBox {
  std::array<double, 3> center = {0.778, 1.37, 5.7};
  std::array<double, 3> half_width = {0.5, 0.5, 3.0};
};

struct CalibrationRequest {
  int target_year = 2040;
  CalibrationBox box;
  int budget = 55;  // parameter triples evaluated, at most
  int replicates = 5;
  int grid_points = 3;  // per axis and refinement level
  ScenarioConfig base;
};

struct CalibrationPoint {
  double m_cost = 0.0;
  double r_max = 0.0;
  double alpha = 0.0;
  int level = 0;
  double mean_peak_year = 0.0;  // replicate mean of per-run peak emission years
  double error = 0.0;           // |mean_peak_year - target|
  bool failed = false;
  std::string diagnostic;
};

struct CalibrationResult {
  CalibrationPoint best;
  std::vector<CalibrationPoint> trace;  // every evaluated point, in order
  bool budget_exhausted = false;        // best error exceeds 5 years
};

inline constexpr double kCalibrationTolerance = 5.0;

// Coarse-to-fine grid search. Level 0 evaluates the box center; level L >= 1
// evaluates a grid_points^3 grid over the box centered at the best point so
// far with half widths halved L-1 times, skipping points already seen and
// clamping parameters at zero. Stops when the budget is spent or a point
// hits the target exactly. Ties keep the earlier point. Throws ConfigError
// when the target lies outside the simulated years.
CalibrationResult calibrate_peak_year(const CalibrationRequest& request, int threads = 1);

// Reads the base config and its "calibration" block:
//   {"target_year", "budget", "replicates", "grid_points",
//    "center": {"m_cost", "r_max", "alpha"}, "half_width": {...}}
CalibrationRequest load_calibration_request(std::string_view config_text);

}  // namespace opclim
