#include "opclim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "json.hpp"
#include "opclim/engine.hpp"
#include "opclim/parallel.hpp"

namespace opclim {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 3> kCalibrationParams = {"m_cost", "r_max", "alpha"};

struct ReplicateOutcome {
  std::vector<double> values;  // one per requested metric, NaN if undefined
  bool failed = false;
  std::string diagnostic;
};

ReplicateOutcome run_one(ScenarioConfig config, std::span<const std::pair<std::string, double>> overrides,
                         std::uint64_t seed, std::span<const Metric> metrics) {
  ReplicateOutcome out;
  try {
    for (const auto& [name, value] : overrides) apply_override(config, name, value);
    config.seed = seed;
    const TimeSeries ts = run_simulation(config, 1);
    const RunSummary summary = summarize(ts, config.strong_threshold);
    for (const Metric m : metrics) out.values.push_back(metric_value(summary, m));
  } catch (const std::exception& e) {
    out.failed = true;
    out.diagnostic = e.what();
  }
  return out;
}

MetricStats aggregate(std::span<const ReplicateOutcome> outcomes, std::size_t metric) {
  MetricStats s;
  double sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.failed || std::isnan(o.values[metric])) continue;
    sum += o.values[metric];
    ++s.n;
  }
  if (s.n == 0) {
    s.mean = s.std = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.mean = sum / s.n;
  double ss = 0.0;
  for (const auto& o : outcomes) {
    if (o.failed || std::isnan(o.values[metric])) continue;
    ss += (o.values[metric] - s.mean) * (o.values[metric] - s.mean);
  }
  s.std = std::sqrt(ss / s.n);
  return s;
}

void require(bool ok, const std::string& field, const std::string& constraint) {
  if (!ok) throw ConfigError(field, constraint);
}

json parse_document(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config document: ") + e.what());
  }
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(n_points, 0)));
  if (v.empty()) return v;
  if (v.size() == 1) {
    v[0] = min;
    return v;
  }
  const double last = static_cast<double>(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double frac = static_cast<double>(i) / last;
    v[i] = spacing == Spacing::linear ? min + (max - min) * frac
                                      : min * std::pow(max / min, frac);
  }
  v.back() = max;
  return v;
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::mean_opinion_final: return "mean_opinion_final";
    case Metric::peak_anomaly: return "peak_anomaly";
    case Metric::peak_emission_year: return "peak_emission_year";
    case Metric::bc_final: return "bc_final";
    case Metric::frac_strong_mitigative: return "frac_strong_mitigative";
    case Metric::frac_strong_nonmitigative: return "frac_strong_nonmitigative";
  }
  return "unknown";
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> metrics = {
      Metric::mean_opinion_final, Metric::peak_anomaly,           Metric::peak_emission_year,
      Metric::bc_final,           Metric::frac_strong_mitigative, Metric::frac_strong_nonmitigative};
  return metrics;
}

Metric parse_metric(std::string_view name) {
  for (const Metric m : all_metrics()) {
    if (metric_name(m) == name) return m;
  }
  throw ConfigError("metrics", "unknown metric " + std::string(name));
}

double metric_value(const RunSummary& s, Metric metric) {
  switch (metric) {
    case Metric::mean_opinion_final: return s.mean_opinion_final;
    case Metric::peak_anomaly: return s.peak_anomaly;
    case Metric::peak_emission_year: return s.peak_emission_year;
    case Metric::bc_final: return s.bc_final ? *s.bc_final : std::numeric_limits<double>::quiet_NaN();
    case Metric::frac_strong_mitigative: return s.frac_strong_mitigative;
    case Metric::frac_strong_nonmitigative: return s.frac_strong_nonmitigative;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void validate(const SweepSpec& spec) {
  require(!spec.axes.empty() && spec.axes.size() <= 2, "sweep.axes", "need one or two axes");
  require(spec.replicates >= 1, "sweep.replicates", "must be >= 1");
  require(!spec.metrics.empty(), "sweep.metrics", "must not be empty");
  for (const auto& axis : spec.axes) {
    const std::string field = "sweep.axes." + axis.parameter;
    require(is_param_name(axis.parameter), field, "unknown parameter name");
    require(axis.n_points >= 2, field, "n_points must be >= 2");
    require(std::isfinite(axis.min) && std::isfinite(axis.max) && axis.min < axis.max, field,
            "min must be < max");
    require(axis.spacing == Spacing::linear || axis.min > 0, field, "log spacing needs min > 0");
  }
  if (spec.axes.size() == 2) {
    require(spec.axes[0].parameter != spec.axes[1].parameter, "sweep.axes",
            "axes must name different parameters");
  }
  validate(spec.base);
}

std::vector<std::size_t> SweepResult::shape() const {
  std::vector<std::size_t> s;
  for (const auto& v : axis_values) s.push_back(v.size());
  return s;
}

std::size_t SweepResult::metric_index(Metric metric) const {
  const auto it = std::ranges::find(metrics, metric);
  if (it == metrics.end()) throw std::out_of_range("metric not in sweep result");
  return static_cast<std::size_t>(it - metrics.begin());
}

const MetricStats& SweepResult::stats(std::size_t cell, Metric metric) const {
  return cells.at(cell).stats.at(metric_index(metric));
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  validate(spec);
  SweepResult result;
  result.axes = spec.axes;
  result.metrics = spec.metrics;
  std::size_t n_cells = 1;
  for (const auto& axis : spec.axes) {
    result.axis_values.push_back(axis.values());
    n_cells *= result.axis_values.back().size();
  }

  result.cells.resize(n_cells);
  std::vector<std::vector<std::pair<std::string, double>>> cell_overrides(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) {
    auto& cell = result.cells[c];
    std::size_t rest = c;
    cell.index.assign(spec.axes.size(), 0);
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      cell.index[a] = rest % result.axis_values[a].size();
      rest /= result.axis_values[a].size();
    }
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      cell.coords.push_back(result.axis_values[a][cell.index[a]]);
      cell_overrides[c].emplace_back(spec.axes[a].parameter, cell.coords.back());
    }
  }

  std::vector<std::size_t> order = options.evaluation_order;
  if (order.empty()) {
    order.resize(n_cells);
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else {
    auto sorted = order;
    std::ranges::sort(sorted);
    std::vector<std::size_t> identity(n_cells);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    if (sorted != identity) throw std::invalid_argument("evaluation_order is not a permutation of the cells");
  }

  const auto reps = static_cast<std::size_t>(spec.replicates);
  std::vector<ReplicateOutcome> outcomes(n_cells * reps);
  parallel_for_each_index(n_cells * reps, options.threads, [&](std::size_t task) {
    const std::size_t cell = order[task / reps];
    const std::size_t rep = task % reps;
    outcomes[cell * reps + rep] =
        run_one(spec.base, cell_overrides[cell], derive_run_seed(spec.base.seed, rep), spec.metrics);
  });

  for (std::size_t c = 0; c < n_cells; ++c) {
    auto& cell = result.cells[c];
    const std::span<const ReplicateOutcome> cell_outcomes(outcomes.data() + c * reps, reps);
    const auto bad = std::ranges::find_if(cell_outcomes, &ReplicateOutcome::failed);
    if (bad != cell_outcomes.end()) {
      cell.failed = true;
      cell.diagnostic = bad->diagnostic;
      for (std::size_t m = 0; m < spec.metrics.size(); ++m) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        cell.stats.push_back({nan, nan, 0});
      }
      continue;
    }
    for (std::size_t m = 0; m < spec.metrics.size(); ++m) cell.stats.push_back(aggregate(cell_outcomes, m));
  }
  return result;
}

SweepResult univariate_noise_sweep(const ScenarioConfig& base, double sigma_min, double sigma_max,
                                   int n_points, int replicates, const SweepOptions& options) {
  SweepSpec spec;
  spec.axes = {SweepAxis{"noise_sigma", sigma_min, sigma_max, n_points, Spacing::linear}};
  spec.replicates = replicates;
  spec.base = base;
  return run_sweep(spec, options);
}

SweepSpec load_sweep_spec(std::string_view config_text) {
  SweepSpec spec;
  spec.base = load_config(config_text);
  const json doc = parse_document(config_text);
  require(doc.contains("sweep") && doc.at("sweep").is_object(), "sweep", "missing sweep block");
  const json& block = doc.at("sweep");
  try {
    for (const auto& [key, _] : block.items()) {
      require(key == "axes" || key == "replicates" || key == "metrics", "sweep." + key, "unknown key");
    }
    require(block.contains("axes") && block.at("axes").is_array(), "sweep.axes", "expected an array");
    for (const auto& a : block.at("axes")) {
      SweepAxis axis;
      axis.parameter = a.at("parameter").get<std::string>();
      axis.min = a.at("min").get<double>();
      axis.max = a.at("max").get<double>();
      axis.n_points = a.value("n_points", 21);
      const auto spacing = a.value("spacing", std::string("linear"));
      require(spacing == "linear" || spacing == "log", "sweep.axes.spacing", "expected linear or log");
      axis.spacing = spacing == "log" ? Spacing::log : Spacing::linear;
      spec.axes.push_back(axis);
    }
    spec.replicates = block.value("replicates", 20);
    if (block.contains("metrics")) {
      spec.metrics.clear();
      for (const auto& m : block.at("metrics")) spec.metrics.push_back(parse_metric(m.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ConfigError("sweep", std::string("invalid sweep block: ") + e.what());
  }
  validate(spec);
  return spec;
}

CalibrationResult calibrate_peak_year(const CalibrationRequest& request, int threads) {
  const ModelParams& p = request.base.params;
  const int last_year = p.start_year + p.horizon_years;
  if (request.target_year < p.start_year || request.target_year > last_year) {
    throw ConfigError("calibration.target_year",
                      "must lie within the simulated years " + std::to_string(p.start_year) + ".." +
                          std::to_string(last_year));
  }
  require(request.budget >= 1, "calibration.budget", "must be >= 1");
  require(request.replicates >= 1, "calibration.replicates", "must be >= 1");
  require(request.grid_points >= 2, "calibration.grid_points", "must be >= 2");
  for (const double h : request.box.half_width) {
    require(h >= 0 && std::isfinite(h), "calibration.half_width", "must be finite and >= 0");
  }
  validate(request.base);

  const auto reps = static_cast<std::size_t>(request.replicates);
  const std::array<Metric, 1> metric = {Metric::peak_emission_year};
  CalibrationResult result;
  std::set<std::array<double, 3>> seen;
  std::array<double, 3> center = request.box.center;
  std::array<double, 3> half = request.box.half_width;
  bool have_best = false;

  const auto evaluate = [&](const std::vector<std::array<double, 3>>& points, int level) {
    std::vector<ReplicateOutcome> outcomes(points.size() * reps);
    parallel_for_each_index(outcomes.size(), threads, [&](std::size_t task) {
      const auto& x = points[task / reps];
      const std::vector<std::pair<std::string, double>> overrides = {
          {"m_cost", x[0]}, {"r_max", x[1]}, {"alpha", x[2]}};
      outcomes[task] = run_one(request.base, overrides,
                               derive_run_seed(request.base.seed, task % reps), metric);
    });
    for (std::size_t i = 0; i < points.size(); ++i) {
      CalibrationPoint pt;
      pt.m_cost = points[i][0];
      pt.r_max = points[i][1];
      pt.alpha = points[i][2];
      pt.level = level;
      const std::span<const ReplicateOutcome> outs(outcomes.data() + i * reps, reps);
      const auto bad = std::ranges::find_if(outs, &ReplicateOutcome::failed);
      if (bad != outs.end()) {
        pt.failed = true;
        pt.diagnostic = bad->diagnostic;
        pt.mean_peak_year = pt.error = std::numeric_limits<double>::quiet_NaN();
      } else {
        pt.mean_peak_year = aggregate(outs, 0).mean;
        pt.error = std::abs(pt.mean_peak_year - request.target_year);
        if (!have_best || pt.error < result.best.error) {
          result.best = pt;
          have_best = true;
        }
      }
      result.trace.push_back(pt);
    }
  };

  const auto clamp_point = [](std::array<double, 3> x) {
    for (double& v : x) v = std::max(v, 0.0);
    return x;
  };

  int remaining = request.budget;
  const auto first = clamp_point(center);
  seen.insert(first);
  evaluate({first}, 0);
  --remaining;

  const int g = request.grid_points;
  for (int level = 1; remaining > 0 && !(have_best && result.best.error == 0.0); ++level) {
    if (have_best) center = {result.best.m_cost, result.best.r_max, result.best.alpha};
    std::vector<std::array<double, 3>> points;
    for (int i = 0; i < g && static_cast<int>(points.size()) < remaining; ++i) {
      for (int j = 0; j < g && static_cast<int>(points.size()) < remaining; ++j) {
        for (int k = 0; k < g && static_cast<int>(points.size()) < remaining; ++k) {
          const std::array<int, 3> idx = {i, j, k};
          std::array<double, 3> x{};
          for (int d = 0; d < 3; ++d) {
            x[d] = center[d] + half[d] * (-1.0 + 2.0 * idx[d] / (g - 1));
          }
          x = clamp_point(x);
          if (seen.insert(x).second) points.push_back(x);
        }
      }
    }
    if (points.empty()) break;  // the grid has collapsed onto evaluated points
    remaining -= static_cast<int>(points.size());
    evaluate(points, level);
    for (double& h : half) h *= 0.5;
  }

  if (!have_best) {
    result.best = result.trace.front();
    result.budget_exhausted = true;
  } else {
    result.budget_exhausted = result.best.error > kCalibrationTolerance;
  }
  return result;
}

CalibrationRequest load_calibration_request(std::string_view config_text) {
  CalibrationRequest request;
  request.base = load_config(config_text);
  const json doc = parse_document(config_text);
  if (!doc.contains("calibration")) return request;
  const json& block = doc.at("calibration");
  require(block.is_object(), "calibration", "expected an object");
  try {
    for (const auto& [key, value] : block.items()) {
      if (key == "target_year") {
        request.target_year = value.get<int>();
      } else if (key == "budget") {
        request.budget = value.get<int>();
      } else if (key == "replicates") {
        request.replicates = value.get<int>();
      } else if (key == "grid_points") {
        request.grid_points = value.get<int>();
      } else if (key == "center" || key == "half_width") {
        auto& target = key == "center" ? request.box.center : request.box.half_width;
        for (const auto& [name, v] : value.items()) {
          const auto it = std::ranges::find(kCalibrationParams, name);
          require(it != kCalibrationParams.end(), "calibration." + key + "." + name,
                  "expected m_cost, r_max or alpha");
          target[static_cast<std::size_t>(it - kCalibrationParams.begin())] = v.get<double>();
        }
      } else {
        throw ConfigError("calibration." + key, "unknown key");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("calibration", std::string("invalid calibration block: ") + e.what());
  }
  return request;
}

}  // namespace opclim
