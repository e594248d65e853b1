#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace opclim {

// Raised for any malformed or invalid configuration. `field()` names the
// offending key (empty for document-level parse errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct LambdaMode {
  enum class Kind { uniform_random, fixed };
  Kind kind = Kind::uniform_random;
  double value = 0.0;  // used when kind == fixed

  static LambdaMode uniform() { return {}; }
  static LambdaMode fixed(double v) { return {Kind::fixed, v}; }
  bool operator==(const LambdaMode&) const = default;
};

// All model constants. Defaults are the published baseline parameter table,
// with T_ref = 1.2 degC as the present-day anomaly and E0 = 4.8339 GtCO2/yr.
struct ModelParams {
  int n_agents = 1000;
  int k_neighbors = 100;
  LambdaMode lambda_mode = LambdaMode::uniform();
  double a_influence = 0.35;
  double psi = 0.7;
  double noise_sigma = 0.03;  // standard deviation of per-agent yearly noise
  double death_rate = 0.014;  // per agent per year (about a 70-year lifespan)
  double m_cost = 0.778;
  double r_max = 1.37;
  double alpha = 5.7;
  double t_ref = 1.2;   // degC
  double c0 = 38.9;     // GtCO2
  double f2x = 4.5;     // W m^-2
  double q1 = 0.33;     // K W^-1 m^2, deep ocean
  double q2 = 0.41;     // K W^-1 m^2, upper ocean
  double d1 = 239.0;    // yr
  double d2 = 4.1;      // yr
  double e0 = 4.8339;   // GtCO2 yr^-1
  double delta = 0.06;  // yr^-1
  int start_year = 2022;
  int horizon_years = 128;  // 2022..2150 inclusive
  // Multiplier for reported emissions only. Unset: chosen at t=0 so that the
  // first reported value is 40 GtCO2/yr.
  std::optional<double> emission_display_scale;
  // Carbon stock at start_year. Unset: the stock whose equilibrium anomaly
  // equals t_ref.
  std::optional<double> initial_carbon;

  bool operator==(const ModelParams&) const = default;
};

struct TruncatedNormal {
  double mean = 0.0;
  double std = 1.0 / 3.0;
  bool operator==(const TruncatedNormal&) const = default;
};
// Every agent holds `value` for the whole run; opinion updates are skipped.
struct AllFixed {
  double value = 1.0;
  bool operator==(const AllFixed&) const = default;
};
struct ExplicitOpinions {
  std::vector<double> values;
  bool operator==(const ExplicitOpinions&) const = default;
};
using OpinionInit = std::variant<TruncatedNormal, AllFixed, ExplicitOpinions>;

struct ScenarioConfig {
  ModelParams params;
  OpinionInit initial_opinion = TruncatedNormal{};
  std::uint64_t seed = 0;
  // Applied on top of `params` at load time; kept for provenance.
  std::vector<std::pair<std::string, double>> overrides;
  std::vector<int> snapshot_years = {2022, 2026, 2027, 2040, 2100, 2150};
  double strong_threshold = 2.0 / 3.0;

  bool operator==(const ScenarioConfig&) const = default;
};

// Parses a JSON object. Keys are ModelParams field names plus
// "lambda_mode", "initial_opinion", "seed", "overrides", "snapshot_years",
// "strong_threshold". The blocks "sweep" and "calibration" are accepted
// and ignored here. An empty document yields the defaults.
ScenarioConfig load_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

// Full-precision JSON that load_config reads back to an equal config.
std::string to_config_text(const ScenarioConfig& config);

void validate(const ScenarioConfig& config);
void validate(const ModelParams& params);

// Named scalar access used by overrides and sweeps. Integer fields accept
// only integral values. "lambda_fixed" switches lambda_mode to fixed(value).
bool is_param_name(std::string_view name);
void set_param(ModelParams& params, std::string_view name, double value);
double get_param(const ModelParams& params, std::string_view name);
std::vector<std::string> param_names();

// Applies (name, value) and records it in config.overrides; throws
// ConfigError for unknown names and re-validates.
void apply_override(ScenarioConfig& config, std::string_view name, double value);

// Seed for replicate `run_index`: mix64(master + (run_index + 1) * phi64),
// phi64 = 0x9E3779B97F4A7C15. mix64 is a bijection, so distinct indices
// always give distinct seeds.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept;

}  // namespace opclim
