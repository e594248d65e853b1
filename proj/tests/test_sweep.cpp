#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "opclim/engine.hpp"
#include "opclim/io.hpp"
#include "opclim/sweep.hpp"

using namespace opclim;

namespace {

ScenarioConfig small_base() {
  ScenarioConfig cfg;
  cfg.params.n_agents = 200;
  cfg.params.k_neighbors = 20;
  cfg.params.horizon_years = 40;
  cfg.seed = 99;
  return cfg;
}

SweepSpec small_spec() {
  SweepSpec spec;
  spec.base = small_base();
  spec.replicates = 2;
  spec.axes = {SweepAxis{"r_max", 0.0, 2.0, 3}, SweepAxis{"psi", 0.3, 0.9, 2}};
  return spec;
}

}  // namespace

TEST_CASE("axis values") {
  const auto lin = SweepAxis{"psi", 0.1, 1.0, 5}.values();
  REQUIRE(lin.size() == 5);
  CHECK(lin.front() == 0.1);
  CHECK(lin.back() == 1.0);
  CHECK(lin[2] == doctest::Approx(0.55));
  const auto lg = SweepAxis{"noise_sigma", 0.001, 0.1, 3, Spacing::log}.values();
  CHECK(lg.front() == 0.001);
  CHECK(lg[1] == doctest::Approx(0.01));
  CHECK(lg.back() == 0.1);
}

TEST_CASE("sweep validation") {
  auto spec = small_spec();
  spec.axes = {SweepAxis{"r_max", 1.0, 1.0, 2}};
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec.axes = {SweepAxis{"r_max", 0.0, 1.0, 1}};
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec.axes = {SweepAxis{"nope", 0.0, 1.0, 3}};
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec.axes = {};
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec.axes = {SweepAxis{"psi", 0.1, 1.0, 2}, SweepAxis{"psi", 0.1, 1.0, 2}};
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = small_spec();
  spec.replicates = 0;
  CHECK_THROWS_AS(validate(spec), ConfigError);
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
}

TEST_CASE("cells use common seeds and match direct runs") {
  const auto spec = small_spec();
  const auto result = run_sweep(spec);
  REQUIRE(result.cells.size() == 6);
  CHECK(result.shape() == std::vector<std::size_t>{3, 2});
  // Row-major, last axis fastest.
  CHECK(result.cells[1].coords == std::vector<double>{0.0, 0.9});
  CHECK(result.cells[2].coords == std::vector<double>{1.0, 0.3});

  auto cfg = spec.base;
  apply_override(cfg, "r_max", 1.0);
  apply_override(cfg, "psi", 0.3);
  const auto direct = run_replicates(cfg, 2);
  double mean = 0.0;
  for (const auto& run : direct.runs) mean += summarize(run).peak_anomaly;
  mean /= 2.0;
  CHECK(result.stats(2, Metric::peak_anomaly).mean == mean);
  CHECK(result.stats(2, Metric::peak_anomaly).n == 2);
}

TEST_CASE("sweep output does not depend on evaluation order or threads") {
  const auto spec = small_spec();
  const auto reference = run_sweep(spec);
  SweepOptions opts;
  opts.threads = 3;
  opts.evaluation_order.resize(reference.cells.size());
  std::iota(opts.evaluation_order.begin(), opts.evaluation_order.end(), std::size_t{0});
  std::reverse(opts.evaluation_order.begin(), opts.evaluation_order.end());
  std::swap(opts.evaluation_order[1], opts.evaluation_order[4]);
  const auto shuffled = run_sweep(spec, opts);
  CHECK(shuffled == reference);

  std::ostringstream a, b;
  write_sweep_long_csv(a, reference);
  write_sweep_long_csv(b, shuffled);
  CHECK(a.str() == b.str());
  std::ostringstream ha, hb;
  write_heatmap_csv(ha, reference, Metric::peak_anomaly);
  write_heatmap_csv(hb, shuffled, Metric::peak_anomaly);
  CHECK(ha.str() == hb.str());
}

TEST_CASE("an invalid cell is reported and the sweep continues") {
  auto spec = small_spec();
  spec.axes = {SweepAxis{"death_rate", 0.2, 1.4, 3}};
  const auto result = run_sweep(spec);
  REQUIRE(result.cells.size() == 3);
  CHECK_FALSE(result.cells[0].failed);
  CHECK_FALSE(result.cells[1].failed);
  CHECK(result.cells[2].failed);
  CHECK(result.cells[2].diagnostic.find("death_rate") != std::string::npos);
}

TEST_CASE("noise sweep") {
  const auto result = univariate_noise_sweep(small_base(), 0.0, 0.1, 3, 2);
  REQUIRE(result.cells.size() == 3);
  CHECK(result.axes[0].parameter == "noise_sigma");
  CHECK(result.axis_values[0] == std::vector<double>{0.0, 0.05, 0.1});
}

TEST_CASE("sweep spec from config text") {
  const auto spec = load_sweep_spec(R"({
    "psi": 0.5,
    "sweep": {"axes": [{"parameter": "m_cost", "min": 0, "max": 2, "n_points": 5}],
              "replicates": 3, "metrics": ["peak_anomaly", "bc_final"]}})");
  CHECK(spec.base.params.psi == 0.5);
  REQUIRE(spec.axes.size() == 1);
  CHECK(spec.axes[0].parameter == "m_cost");
  CHECK(spec.axes[0].n_points == 5);
  CHECK(spec.replicates == 3);
  CHECK(spec.metrics == std::vector<Metric>{Metric::peak_anomaly, Metric::bc_final});
  CHECK_THROWS_AS(load_sweep_spec(R"({"sweep": {"axes": [], "metrics": ["bogus"]}})"), ConfigError);
}

TEST_CASE("calibration") {
  CalibrationRequest req;
  req.base = small_base();
  req.replicates = 1;
  req.budget = 1;
  const auto one = calibrate_peak_year(req);
  REQUIRE(one.trace.size() == 1);
  CHECK(one.best.m_cost == 0.778);
  CHECK(one.best.r_max == 1.37);
  CHECK(one.best.alpha == 5.7);
  CHECK(one.best.error == std::abs(one.best.mean_peak_year - 2040.0));
  CHECK(one.budget_exhausted == (one.best.error > kCalibrationTolerance));

  req.budget = 12;
  const auto more = calibrate_peak_year(req);
  CHECK(more.trace.size() <= 12);
  CHECK(more.trace.front().level == 0);
  for (const auto& pt : more.trace) {
    CHECK(more.best.error <= pt.error);
    CHECK(pt.m_cost >= 0.0);
    CHECK(pt.r_max >= 0.0);
    CHECK(pt.alpha >= 0.0);
  }
  CHECK(calibrate_peak_year(req).trace.size() == more.trace.size());

  req.target_year = 1900;
  CHECK_THROWS_AS(calibrate_peak_year(req), ConfigError);
}

TEST_CASE("calibration request from config text") {
  const auto req = load_calibration_request(R"({
    "calibration": {"target_year": 2050, "budget": 9, "replicates": 2,
                    "center": {"m_cost": 0.5, "r_max": 1.0, "alpha": 4.0},
                    "half_width": {"m_cost": 0.1, "r_max": 0.2, "alpha": 1.0}}})");
  CHECK(req.target_year == 2050);
  CHECK(req.budget == 9);
  CHECK(req.replicates == 2);
  CHECK(req.box.center == std::array<double, 3>{0.5, 1.0, 4.0});
  CHECK(req.box.half_width == std::array<double, 3>{0.1, 0.2, 1.0});
  const auto defaults = load_calibration_request("");
  CHECK(defaults.target_year == 2040);
  CHECK(defaults.budget == 55);
  CHECK(defaults.box.center == std::array<double, 3>{0.778, 1.37, 5.7});
}
