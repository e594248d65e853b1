#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "opclim/engine.hpp"
#include "opclim/metrics.hpp"
#include "opclim/params.hpp"
#include "opclim/sweep.hpp"

namespace py = pybind11;
using namespace opclim;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::object optional_number(const std::optional<double>& v) {
  return v ? py::cast(*v) : py::none();
}

py::dict summary_dict(const RunSummary& s) {
  py::dict d;
  d["mean_opinion_final"] = s.mean_opinion_final;
  d["peak_anomaly"] = s.peak_anomaly;
  d["peak_emission_year"] = s.peak_emission_year;
  d["bc_final"] = optional_number(s.bc_final);
  d["frac_strong_mitigative"] = s.frac_strong_mitigative;
  d["frac_strong_nonmitigative"] = s.frac_strong_nonmitigative;
  return d;
}

py::dict series_dict(const TimeSeries& ts, double strong_threshold) {
  py::dict d;
  d["years"] = to_array(ts.years);
  d["mean_opinion"] = to_array(ts.mean_opinion);
  d["emissions_model"] = to_array(ts.emissions_model);
  d["emissions_display"] = to_array(ts.emissions_display);
  d["carbon"] = to_array(ts.carbon);
  d["anomaly"] = to_array(ts.anomaly);
  d["response"] = to_array(ts.response);
  d["display_scale"] = ts.display_scale;
  py::dict snaps;
  for (const auto& s : ts.snapshots) snaps[py::int_(s.year)] = to_array(s.opinions);
  d["snapshots"] = snaps;
  d["summary"] = summary_dict(summarize(ts, strong_threshold));
  return d;
}

py::dict stats_dict(const SeriesStats& s) {
  py::dict d;
  d["mean"] = to_array(s.mean);
  d["std"] = to_array(s.std);
  return d;
}

ScenarioConfig with_seed(std::string_view text, std::optional<std::uint64_t> seed) {
  auto cfg = load_config(text);
  if (seed) cfg.seed = *seed;
  return cfg;
}

py::dict run(std::string_view text, std::optional<std::uint64_t> seed, int threads) {
  const auto cfg = with_seed(text, seed);
  TimeSeries ts;
  {
    py::gil_scoped_release release;
    ts = run_simulation(cfg, threads);
  }
  return series_dict(ts, cfg.strong_threshold);
}

py::dict replicates(std::string_view text, int n, std::optional<std::uint64_t> seed, int threads) {
  const auto cfg = with_seed(text, seed);
  ReplicateSet set;
  {
    py::gil_scoped_release release;
    set = run_replicates(cfg, n, threads);
  }
  py::dict d;
  d["years"] = to_array(set.summary.years);
  d["seeds"] = set.seeds;
  d["mean_opinion"] = stats_dict(set.summary.mean_opinion);
  d["emissions_model"] = stats_dict(set.summary.emissions_model);
  d["emissions_display"] = stats_dict(set.summary.emissions_display);
  d["carbon"] = stats_dict(set.summary.carbon);
  d["anomaly"] = stats_dict(set.summary.anomaly);
  d["response"] = stats_dict(set.summary.response);
  py::list summaries;
  for (const auto& r : set.runs) summaries.append(summary_dict(summarize(r, cfg.strong_threshold)));
  d["summaries"] = summaries;
  return d;
}

py::dict sweep(std::string_view text, std::optional<int> replicates_override, int threads) {
  auto spec = load_sweep_spec(text);
  if (replicates_override) spec.replicates = *replicates_override;
  SweepOptions options;
  options.threads = threads;
  SweepResult r;
  {
    py::gil_scoped_release release;
    r = run_sweep(spec, options);
  }
  std::vector<py::ssize_t> shape;
  for (const auto s : r.shape()) shape.push_back(static_cast<py::ssize_t>(s));

  py::dict d;
  py::list axes;
  for (std::size_t a = 0; a < r.axes.size(); ++a) {
    py::dict ax;
    ax["parameter"] = r.axes[a].parameter;
    ax["values"] = to_array(r.axis_values[a]);
    axes.append(ax);
  }
  d["axes"] = axes;
  py::dict metrics;
  for (const auto m : r.metrics) {
    py::array_t<double> mean(shape), sd(shape);
    py::array_t<int> n(shape);
    auto pm = mean.mutable_data();
    auto ps = sd.mutable_data();
    auto pn = n.mutable_data();
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
      const auto& st = r.stats(c, m);
      pm[c] = r.cells[c].failed ? std::nan("") : st.mean;
      ps[c] = r.cells[c].failed ? std::nan("") : st.std;
      pn[c] = st.n;
    }
    py::dict entry;
    entry["mean"] = mean;
    entry["std"] = sd;
    entry["n"] = n;
    metrics[py::str(std::string(metric_name(m)))] = entry;
  }
  d["metrics"] = metrics;
  py::list failed;
  for (const auto& cell : r.cells) {
    if (cell.failed) failed.append(py::make_tuple(cell.coords, cell.diagnostic));
  }
  d["failed_cells"] = failed;
  return d;
}

py::dict point_dict(const CalibrationPoint& p) {
  py::dict d;
  d["m_cost"] = p.m_cost;
  d["r_max"] = p.r_max;
  d["alpha"] = p.alpha;
  d["level"] = p.level;
  d["mean_peak_year"] = p.mean_peak_year;
  d["error"] = p.error;
  d["failed"] = p.failed;
  return d;
}

py::dict calibrate(std::string_view text, std::optional<int> budget, std::optional<int> replicates_override,
                   int threads) {
  auto req = load_calibration_request(text);
  if (budget) req.budget = *budget;
  if (replicates_override) req.replicates = *replicates_override;
  CalibrationResult r;
  {
    py::gil_scoped_release release;
    r = calibrate_peak_year(req, threads);
  }
  py::dict d;
  d["best"] = point_dict(r.best);
  py::list trace;
  for (const auto& p : r.trace) trace.append(point_dict(p));
  d["trace"] = trace;
  d["budget_exhausted"] = r.budget_exhausted;
  d["target_year"] = req.target_year;
  return d;
}

py::dict default_params() {
  const ModelParams p;
  py::dict d;
  for (const auto& name : param_names()) {
    if (name == "lambda_fixed") continue;
    const double v = get_param(p, name);
    d[py::str(name)] = std::isnan(v) ? py::none() : py::cast(v);
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_opclim, m) {
  m.doc() = "Coupled opinion dynamics and two-box climate model";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def("run", &run, py::arg("config_text"), py::arg("seed") = py::none(), py::arg("threads") = 1,
        "Simulate one scenario; returns arrays per year, snapshots and a summary.");
  m.def("run_replicates", &replicates, py::arg("config_text"), py::arg("n"), py::arg("seed") = py::none(),
        py::arg("threads") = 1, "Run n seeded replicates; returns per-year mean/std and per-run summaries.");
  m.def("sweep", &sweep, py::arg("config_text"), py::arg("replicates") = py::none(), py::arg("threads") = 1,
        "Run the config's sweep block; metric grids have one dimension per axis.");
  m.def("calibrate", &calibrate, py::arg("config_text"), py::arg("budget") = py::none(),
        py::arg("replicates") = py::none(), py::arg("threads") = 1,
        "Search (m_cost, r_max, alpha) for the target peak-emission year.");
  m.def(
      "bimodality_coefficient",
      [](const std::vector<double>& x) { return bimodality_coefficient(x); }, py::arg("samples"));
  m.def(
      "normalize_config", [](std::string_view text) { return to_config_text(load_config(text)); },
      py::arg("config_text"), "Parse, validate and re-serialize a scenario config.");
  m.def("default_params", &default_params);
}
