// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "opclim/climate.hpp"
#include "opclim/engine.hpp"
#include "opclim/io.hpp"
#include "opclim/metrics.hpp"
#include "opclim/opinion.hpp"
#include "opclim/rng.hpp"
#include "opclim/sweep.hpp"

using namespace opclim;

namespace {

const int kThreads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
constexpr int kReplicates = 20;
int failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail) {
  std::printf("criterion %2d: %s  %s (%s)\n", id, pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::size_t row_of(const TimeSeries& ts, int year) {
  return static_cast<std::size_t>(year - ts.years.front());
}

struct Scenario {
  ReplicateSet set;
  std::vector<RunSummary> summaries;

  double mean_final_opinion() const {
    std::vector<double> v;
    for (const auto& s : summaries) v.push_back(s.mean_opinion_final);
    return mean_of(v);
  }
  double mean_peak_anomaly() const {
    std::vector<double> v;
    for (const auto& s : summaries) v.push_back(s.peak_anomaly);
    return mean_of(v);
  }
  double mean_anomaly_at(int year) const {
    std::vector<double> v;
    for (const auto& r : set.runs) v.push_back(r.anomaly[row_of(r, year)]);
    return mean_of(v);
  }
};

Scenario run_scenario(const ScenarioConfig& cfg, int n = kReplicates) {
  Scenario s{run_replicates(cfg, n, kThreads), {}};
  for (const auto& r : s.set.runs) s.summaries.push_back(summarize(r, cfg.strong_threshold));
  return s;
}

// Non-increasing (sign = -1) or non-decreasing (sign = +1), counting violations.
int monotone_violations(const std::vector<double>& v, int sign) {
  int bad = 0;
  for (std::size_t i = 1; i < v.size(); ++i) bad += sign * (v[i] - v[i - 1]) < 0.0;
  return bad;
}

std::vector<double> sweep_peak(const std::string& param, double lo, double hi) {
  SweepSpec spec;
  spec.axes = {SweepAxis{param, lo, hi, 5}};
  spec.replicates = 10;
  spec.metrics = {Metric::peak_anomaly};
  SweepOptions opts;
  opts.threads = kThreads;
  const auto r = run_sweep(spec, opts);
  std::vector<double> out;
  for (std::size_t c = 0; c < r.cells.size(); ++c) out.push_back(r.stats(c, Metric::peak_anomaly).mean);
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i], 3);
  return s;
}

// Sarle's coefficient from unbiased k-statistics, independent of the library.
double bc_oracle(const std::vector<double>& x) {
  const long double n = static_cast<long double>(x.size());
  long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (double v : x) {
    s1 += v;
    s2 += v * static_cast<long double>(v);
    s3 += v * static_cast<long double>(v) * v;
    s4 += v * static_cast<long double>(v) * v * v;
  }
  const long double k2 = (n * s2 - s1 * s1) / (n * (n - 1));
  const long double k3 = (2 * s1 * s1 * s1 - 3 * n * s1 * s2 + n * n * s3) / (n * (n - 1) * (n - 2));
  const long double k4 = (-6 * s1 * s1 * s1 * s1 + 12 * n * s1 * s1 * s2 - 3 * n * (n - 1) * s2 * s2 -
                          4 * n * (n + 1) * s1 * s3 + n * n * (n + 1) * s4) /
                         (n * (n - 1) * (n - 2) * (n - 3));
  const long double g1 = k3 / std::pow(k2, 1.5L);
  const long double g2 = k4 / (k2 * k2);
  return static_cast<double>((g1 * g1 + 1) / (g2 + 3 * (n - 1) * (n - 1) / ((n - 2) * (n - 3))));
}

Scenario criteria_baseline() {
  ScenarioConfig cfg;
  for (int y = 2022; y <= 2045; ++y) cfg.snapshot_years.push_back(y);
  const auto base = run_scenario(cfg);

  const double final_op = base.mean_final_opinion();
  report(1, final_op >= 0.16 && final_op <= 0.46, "baseline mean opinion in [0.16, 0.46]",
         "replicate-mean 2150 mean opinion " + fmt(final_op));

  const double peak = base.mean_peak_anomaly();
  report(2, peak <= 1.7, "baseline peak anomaly <= 1.7 degC", "replicate-mean peak anomaly " + fmt(peak));

  const auto& e = base.set.summary.emissions_model.mean;
  const double ratio = e.back() / e.front();
  const auto& d = base.set.summary.emissions_display.mean;
  report(3, ratio >= 0.6 && ratio <= 0.8, "emission ratio final/initial in [0.60, 0.80]",
         "ratio " + fmt(ratio) + ", displayed " + fmt(d.front(), 3) + " -> " + fmt(d.back(), 3) + " GtCO2/yr");

  return base;
}

void criterion_stubborn() {
  ScenarioConfig cfg;
  cfg.params.lambda_mode = LambdaMode::fixed(0.0);
  const double t2100 = run_scenario(cfg).mean_anomaly_at(2100);
  report(4, t2100 > 2.0, "stubborn anomaly at 2100 > 2.0 degC", "replicate-mean anomaly 2100 " + fmt(t2100));
}

void criterion_worst() {
  ScenarioConfig cfg;
  cfg.params.r_max = 0.0;
  const auto s = run_scenario(cfg);
  const double op = s.mean_final_opinion();
  const double t2100 = s.mean_anomaly_at(2100);
  report(5, op >= -0.95 && op <= -0.65 && t2100 > 2.5,
         "worst case opinion in [-0.95, -0.65] and anomaly 2100 > 2.5 degC",
         "mean opinion " + fmt(op) + ", anomaly 2100 " + fmt(t2100));
}

void criterion_best() {
  ScenarioConfig cfg;
  cfg.initial_opinion = AllFixed{1.0};
  cfg.params.noise_sigma = 0.0;
  cfg.params.death_rate = 0.0;
  const auto ts = run_simulation(cfg, kThreads);
  bool zero = true, geometric = true, decreasing = true;
  double worst_dev = 0.0;
  for (std::size_t t = 0; t < ts.size(); ++t) {
    zero = zero && ts.emissions_model[t] == 0.0 && ts.emissions_display[t] == 0.0;
    const double expected = ts.carbon[0] * std::pow(1.0 - cfg.params.delta, static_cast<double>(t));
    worst_dev = std::max(worst_dev, std::abs(ts.carbon[t] - expected));
    if (t > 5) decreasing = decreasing && ts.anomaly[t] < ts.anomaly[t - 1];
  }
  geometric = worst_dev <= 1e-12;
  report(6, zero && geometric && decreasing, "best case: no emissions, geometric carbon decay, cooling",
         "max |C - C0(1-delta)^t| " + fmt(worst_dev, 2) + ", anomaly 2150 " + fmt(ts.anomaly.back()));
}

void criterion_polarization(const Scenario& base) {
  int polarized = 0;
  std::string first_years;
  for (const auto& r : base.set.runs) {
    int first = 0;
    for (int y = 2022; y <= 2045 && first == 0; ++y) {
      const auto* snap = r.snapshot_at(y);
      if (snap && bimodality_coefficient(snap->opinions) >= 0.5) first = y;
    }
    polarized += first != 0;
    first_years += (first_years.empty() ? "" : " ") + (first ? std::to_string(first) : std::string("-"));
  }
  report(7, polarized >= 16, "BC >= 0.5 by 2045 in >= 80% of replicates",
         std::to_string(polarized) + "/" + std::to_string(kReplicates) + " replicates; first years " + first_years);
}

void criterion_calibration(const Scenario& table) {
  CalibrationRequest req;
  const auto result = calibrate_peak_year(req, kThreads);
  const auto& b = result.best;

  // The default triple, from the baseline replicates.
  std::vector<double> years;
  for (const auto& s : table.summaries) years.push_back(s.peak_emission_year);
  const double table_year = mean_of(years);

  const bool ok = std::abs(b.mean_peak_year - 2040.0) <= 5.0 && std::abs(table_year - 2040.0) <= 5.0;
  report(8, ok, "calibrated and published triples peak in 2040 +- 5",
         "best (" + fmt(b.m_cost) + ", " + fmt(b.r_max) + ", " + fmt(b.alpha) + ") peaks " +
             fmt(b.mean_peak_year, 6) + " after " + std::to_string(result.trace.size()) +
             " points; (0.778, 1.37, 5.7) peaks " + fmt(table_year, 6));
}

void criterion_sensitivity() {
  const auto rmax = sweep_peak("r_max", 0.0, 2.0);
  const auto psi = sweep_peak("psi", 0.1, 1.0);
  const auto mcost = sweep_peak("m_cost", 0.0, 2.0);
  const int v_r = monotone_violations(rmax, -1);
  const int v_p = monotone_violations(psi, -1);
  const int v_m = monotone_violations(mcost, +1);
  const double drop = psi.front() - psi.back();
  report(9, v_r <= 1 && v_p <= 1 && v_m <= 1 && drop >= 0.8, "peak anomaly trends in r_max, psi, m_cost",
         "r_max [" + join(rmax) + "], psi [" + join(psi) + "], m_cost [" + join(mcost) +
             "], psi drop " + fmt(drop, 3));
}

void criterion_noise() {
  ScenarioConfig base;
  SweepOptions opts;
  opts.threads = kThreads;
  const auto r = univariate_noise_sweep(base, 0.0, 0.1, 2, kReplicates, opts);
  const double quiet = r.stats(0, Metric::peak_anomaly).mean;
  const double noisy = r.stats(1, Metric::peak_anomaly).mean;
  const double rise = noisy - quiet;
  report(10, rise >= 0.3 && rise <= 0.9, "noise 0 -> 0.1 raises peak anomaly by 0.6 +- 0.3 degC",
         "peak " + fmt(quiet) + " -> " + fmt(noisy) + ", rise " + fmt(rise, 3));
}

void criterion_properties() {
  std::vector<std::string> broken;
  const ModelParams p;

  if (radiative_forcing(p.c0, p) != p.f2x) broken.push_back("doubling forcing");

  for (double f : {0.0, 1.622, 4.5}) {
    const ClimateState eq{p.q1 * f, p.q2 * f, 0.0};
    const auto next = step_temperature(eq, f, p);
    if (next.t_deep != eq.t_deep || next.t_upper != eq.t_upper) broken.push_back("two-box fixed point");
  }

  for (double o : {-0.5, 0.0, 0.3}) {
    double c = 5.0;
    for (int i = 0; i < 1000; ++i) c = step_carbon(c, o, p);
    const double target = 0.5 * p.e0 * (1.0 - o) / p.delta;
    if (std::abs(c - target) / target > 1e-3) broken.push_back("carbon fixed point");
  }

  SplitMix64 rng(31337);
  for (int trial = 0; trial < 10000; ++trial) {
    const double self = 2.0 * uniform01(rng) - 1.0;
    std::vector<double> others(1 + uniform_below(rng, 150));
    for (double& o : others) o = 2.0 * uniform01(rng) - 1.0;
    const auto w = normalized_weights(self, others, 0.35);
    if (std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) > 1e-12) {
      broken.push_back("weights sum");
      break;
    }
  }

  ModelParams q;
  for (int trial = 0; trial < 10000; ++trial) {
    q.psi = 2.0 * uniform01(rng);
    AgentState a{2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0, uniform01(rng)};
    std::vector<double> others(uniform_below(rng, 100));
    for (double& o : others) o = 2.0 * uniform01(rng) - 1.0;
    const double out = update_opinion(a, others, 4.0 * uniform01(rng) - 2.0, q, 0.3 * standard_normal(rng));
    if (!(out >= -1.0 && out <= 1.0)) {
      broken.push_back("opinion bounds");
      break;
    }
  }

  const std::size_t n = 100000;
  std::vector<double> uni(n), nor(n), two(n);
  for (std::size_t i = 0; i < n; ++i) {
    uni[i] = 2.0 * uniform01(rng) - 1.0;
    nor[i] = standard_normal(rng);
    two[i] = uniform01(rng) < 0.5 ? -1.0 : 1.0;
  }
  const double bu = bimodality_coefficient(uni), bn = bimodality_coefficient(nor), bt = bimodality_coefficient(two);
  const bool bc_ok = std::abs(bu - 5.0 / 9.0) < 0.02 && std::abs(bn - 1.0 / 3.0) < 0.02 && std::abs(bt - 1.0) < 0.02 &&
                     std::abs(bu - bc_oracle(uni)) < 0.02 && std::abs(bn - bc_oracle(nor)) < 0.02 &&
                     std::abs(bt - bc_oracle(two)) < 0.02;
  if (!bc_ok) broken.push_back("BC analytic values");

  ScenarioConfig cfg;
  cfg.seed = 2718;
  const auto serial = run_simulation(cfg, 1);
  const auto parallel = run_simulation(cfg, std::max(kThreads, 4));
  std::ostringstream sa, sb;
  write_timeseries_csv(sa, serial);
  write_timeseries_csv(sb, parallel);
  if (!(serial == parallel) || sa.str() != sb.str()) broken.push_back("run determinism");

  SweepSpec spec;
  spec.base.params.n_agents = 300;
  spec.base.params.k_neighbors = 30;
  spec.axes = {SweepAxis{"r_max", 0.0, 2.0, 3}, SweepAxis{"psi", 0.4, 1.0, 2}};
  spec.replicates = 2;
  SweepOptions one, many;
  many.threads = std::max(kThreads, 4);
  many.evaluation_order = {5, 3, 1, 0, 2, 4};
  const auto ra = run_sweep(spec, one);
  const auto rb = run_sweep(spec, many);
  std::ostringstream la, lb;
  write_sweep_long_csv(la, ra);
  write_sweep_long_csv(lb, rb);
  if (!(ra == rb) || la.str() != lb.str()) broken.push_back("sweep determinism");

  std::string detail = "BC uniform " + fmt(bu) + ", normal " + fmt(bn) + ", two-point " + fmt(bt);
  for (const auto& b : broken) detail += "; broken: " + b;
  report(11, broken.empty(), "unit and property suite", detail);
}

}  // namespace

int main() {
  const auto baseline = criteria_baseline();
  criterion_stubborn();
  criterion_worst();
  criterion_best();
  criterion_polarization(baseline);
  criterion_calibration(baseline);
  criterion_sensitivity();
  criterion_noise();
  criterion_properties();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
