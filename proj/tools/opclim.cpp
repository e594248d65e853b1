// opclim: run, sweep and calibrate the coupled opinion-climate model.
//
//   opclim run       --config configs/baseline.json --out out/baseline
//   opclim sweep     --config configs/sweep_r_max.json --out out/r_max --plot
//   opclim calibrate --config configs/calibrate.json --out out/calibration

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "opclim/engine.hpp"
#include "opclim/io.hpp"
#include "opclim/metrics.hpp"
#include "opclim/params.hpp"
#include "opclim/plot.hpp"
#include "opclim/sweep.hpp"

namespace fs = std::filesystem;

namespace {

struct Invocation {
  std::string config_path;
  std::string output_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<int> threads;
  std::vector<std::string> sets;
  bool plot = false;
  bool force = false;
};

class OutputDir {
 public:
  OutputDir(const std::string& dir, bool force) : dir_(dir), force_(force) { fs::create_directories(dir_); }

  // Refuses to replace an existing file unless --force was given.
  void write(const std::string& name, const std::string& contents) const {
    const fs::path path = dir_ / name;
    if (fs::exists(path) && !force_) {
      throw std::runtime_error(path.string() + " already exists (use --force to overwrite)");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + path.string());
  }

  // Checks every name first so a refused run leaves no partial output.
  void check(const std::vector<std::string>& names) const {
    if (force_) return;
    for (const auto& n : names) {
      if (fs::exists(dir_ / n)) {
        throw std::runtime_error((dir_ / n).string() + " already exists (use --force to overwrite)");
      }
    }
  }

 private:
  fs::path dir_;
  bool force_;
};

int resolve_threads(const Invocation& inv) {
  if (inv.threads) return std::max(*inv.threads, 1);
  if (const char* env = std::getenv("OPCLIM_THREADS")) {
    try {
      return std::max(std::stoi(env), 1);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring invalid OPCLIM_THREADS=" << env << "\n";
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string read_text(const std::string& path) {
  if (path.empty()) return "";
  std::ifstream in(path);
  if (!in) throw opclim::ConfigError("", "cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void apply_cli_overrides(const Invocation& inv, opclim::ScenarioConfig& config) {
  if (inv.seed) config.seed = *inv.seed;
  for (const auto& s : inv.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw opclim::ConfigError(s, "expected --set name=value");
    double value;
    try {
      value = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw opclim::ConfigError(s.substr(0, eq), "value is not a number");
    }
    opclim::apply_override(config, s.substr(0, eq), value);
  }
}

int cmd_run(const Invocation& inv) {
  auto config = opclim::load_config(read_text(inv.config_path));
  apply_cli_overrides(inv, config);
  const int replicates = inv.replicates.value_or(1);
  if (replicates < 1) throw opclim::ConfigError("replicates", "must be >= 1");
  const int threads = resolve_threads(inv);

  OutputDir out(inv.output_dir, inv.force);
  std::vector<std::string> files = {"timeseries.csv", "snapshots.csv", "summary.csv"};
  if (replicates > 1) files.push_back("timeseries_std.csv");
  if (inv.plot) files.push_back("timeseries.svg");
  out.check(files);

  std::vector<opclim::TimeSeries> runs;
  std::vector<std::uint64_t> seeds;
  std::ostringstream series_csv;
  if (replicates == 1) {
    runs.push_back(opclim::run_simulation(config, threads));
    seeds.push_back(config.seed);
    opclim::write_timeseries_csv(series_csv, runs.front());
  } else {
    auto set = opclim::run_replicates(config, replicates, threads);
    runs = std::move(set.runs);
    seeds = std::move(set.seeds);
    opclim::write_replicate_summary_csv(series_csv, set.summary, false);
    std::ostringstream std_csv;
    opclim::write_replicate_summary_csv(std_csv, set.summary, true);
    out.write("timeseries_std.csv", std_csv.str());
  }
  out.write("timeseries.csv", series_csv.str());

  std::ostringstream snapshots;
  opclim::write_snapshots_csv(snapshots, runs.front());
  out.write("snapshots.csv", snapshots.str());

  std::vector<opclim::RunSummary> summaries;
  for (const auto& r : runs) summaries.push_back(opclim::summarize(r, config.strong_threshold));
  std::ostringstream summary;
  opclim::write_summary_csv(summary, summaries, seeds);
  out.write("summary.csv", summary.str());
  if (inv.plot) out.write("timeseries.svg", opclim::svg_timeseries(runs.front()));

  double mean_final = 0.0, peak = 0.0;
  for (const auto& s : summaries) {
    mean_final += s.mean_opinion_final;
    peak += s.peak_anomaly;
  }
  std::cout << "runs: " << runs.size() << "  mean opinion (final): "
            << opclim::format_number(mean_final / summaries.size())
            << "  peak anomaly: " << opclim::format_number(peak / summaries.size()) << " degC\n";
  return 0;
}

int cmd_sweep(const Invocation& inv) {
  if (inv.config_path.empty()) throw opclim::ConfigError("config", "sweep requires --config");
  auto spec = opclim::load_sweep_spec(read_text(inv.config_path));
  apply_cli_overrides(inv, spec.base);
  if (inv.replicates) spec.replicates = *inv.replicates;
  opclim::validate(spec);

  OutputDir out(inv.output_dir, inv.force);
  std::vector<std::string> files = {"sweep_long.csv"};
  for (const auto m : spec.metrics) {
    files.push_back("heatmap_" + std::string(opclim::metric_name(m)) + ".csv");
    if (inv.plot) files.push_back("sweep_" + std::string(opclim::metric_name(m)) + ".svg");
  }
  out.check(files);

  opclim::SweepOptions options;
  options.threads = resolve_threads(inv);
  const auto result = opclim::run_sweep(spec, options);

  std::ostringstream long_csv;
  opclim::write_sweep_long_csv(long_csv, result);
  out.write("sweep_long.csv", long_csv.str());
  for (const auto m : result.metrics) {
    const std::string name(opclim::metric_name(m));
    std::ostringstream grid;
    opclim::write_heatmap_csv(grid, result, m);
    out.write("heatmap_" + name + ".csv", grid.str());
    if (inv.plot) out.write("sweep_" + name + ".svg", opclim::svg_sweep(result, m));
  }

  std::size_t failed = 0;
  for (const auto& cell : result.cells) {
    if (cell.failed) {
      ++failed;
      std::cerr << "cell " << opclim::format_number(cell.coords[0]) << " failed: " << cell.diagnostic << "\n";
    }
  }
  std::cout << "cells: " << result.cells.size() << "  failed: " << failed << "\n";
  return failed == result.cells.size() ? 1 : 0;
}

int cmd_calibrate(const Invocation& inv) {
  auto request = opclim::load_calibration_request(read_text(inv.config_path));
  apply_cli_overrides(inv, request.base);
  if (inv.replicates) request.replicates = *inv.replicates;

  OutputDir out(inv.output_dir, inv.force);
  out.check({"calibration_trace.csv", "best_params.json"});
  const auto result = opclim::calibrate_peak_year(request, resolve_threads(inv));

  std::ostringstream trace;
  opclim::write_calibration_trace_csv(trace, result);
  out.write("calibration_trace.csv", trace.str());
  const auto& b = result.best;
  const nlohmann::json best = {{"m_cost", b.m_cost},
                               {"r_max", b.r_max},
                               {"alpha", b.alpha},
                               {"target_year", request.target_year},
                               {"achieved_peak_year", b.mean_peak_year},
                               {"error_years", b.error},
                               {"evaluated_points", result.trace.size()},
                               {"budget_exhausted", result.budget_exhausted}};
  out.write("best_params.json", best.dump(2) + "\n");

  std::cout << "best m_cost=" << opclim::format_number(b.m_cost) << " r_max=" << opclim::format_number(b.r_max)
            << " alpha=" << opclim::format_number(b.alpha)
            << "  achieved peak year: " << opclim::format_number(b.mean_peak_year) << "\n";
  if (result.budget_exhausted) {
    std::cerr << "warning: budget exhausted; no point within " << opclim::kCalibrationTolerance
              << " years of " << request.target_year << " (best so far reported)\n";
  }
  return 0;
}

void add_common(CLI::App* cmd, Invocation& inv, bool config_required) {
  auto* opt = cmd->add_option("--config", inv.config_path, "Scenario config (JSON)");
  if (config_required) opt->required();
  opt->check(CLI::ExistingFile);
  cmd->add_option("--out", inv.output_dir, "Output directory (created if absent)");
  cmd->add_option("--seed", inv.seed, "Master seed (overrides the config)");
  cmd->add_option("--replicates", inv.replicates, "Replicates per run or cell");
  cmd->add_option("--threads", inv.threads, "Worker threads (default: OPCLIM_THREADS or all cores)");
  cmd->add_option("--set", inv.sets, "Parameter override name=value (repeatable)");
  cmd->add_flag("--plot", inv.plot, "Also write SVG plots");
  cmd->add_flag("--force", inv.force, "Overwrite existing output files");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled opinion dynamics and two-box climate simulator"};
  app.require_subcommand(1);
  Invocation inv;
  auto* run = app.add_subcommand("run", "Simulate one scenario");
  auto* sweep = app.add_subcommand("sweep", "Univariate or bivariate parameter sweep");
  auto* calibrate = app.add_subcommand("calibrate", "Search (m_cost, r_max, alpha) for a target peak-emission year");
  add_common(run, inv, false);
  add_common(sweep, inv, true);
  add_common(calibrate, inv, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(inv);
    if (sweep->parsed()) return cmd_sweep(inv);
    return cmd_calibrate(inv);
  } catch (const opclim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const opclim::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
