#include "opclim/params.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "opclim/rng.hpp"

namespace opclim {

using nlohmann::json;

namespace {

struct DoubleField {
  std::string_view name;
  double ModelParams::*member;
};

constexpr std::array kDoubleFields = {
    DoubleField{"a_influence", &ModelParams::a_influence},
    DoubleField{"psi", &ModelParams::psi},
    DoubleField{"noise_sigma", &ModelParams::noise_sigma},
    DoubleField{"death_rate", &ModelParams::death_rate},
    DoubleField{"m_cost", &ModelParams::m_cost},
    DoubleField{"r_max", &ModelParams::r_max},
    DoubleField{"alpha", &ModelParams::alpha},
    DoubleField{"t_ref", &ModelParams::t_ref},
    DoubleField{"c0", &ModelParams::c0},
    DoubleField{"f2x", &ModelParams::f2x},
    DoubleField{"q1", &ModelParams::q1},
    DoubleField{"q2", &ModelParams::q2},
    DoubleField{"d1", &ModelParams::d1},
    DoubleField{"d2", &ModelParams::d2},
    DoubleField{"e0", &ModelParams::e0},
    DoubleField{"delta", &ModelParams::delta},
};

struct IntField {
  std::string_view name;
  int ModelParams::*member;
};

constexpr std::array kIntFields = {
    IntField{"n_agents", &ModelParams::n_agents},
    IntField{"k_neighbors", &ModelParams::k_neighbors},
    IntField{"start_year", &ModelParams::start_year},
    IntField{"horizon_years", &ModelParams::horizon_years},
};

struct OptionalField {
  std::string_view name;
  std::optional<double> ModelParams::*member;
};

constexpr std::array kOptionalFields = {
    OptionalField{"emission_display_scale", &ModelParams::emission_display_scale},
    OptionalField{"initial_carbon", &ModelParams::initial_carbon},
};

constexpr std::string_view kLambdaFixed = "lambda_fixed";

void require(bool ok, std::string_view field, const std::string& constraint) {
  if (!ok) throw ConfigError(std::string(field), constraint);
}

double as_number(const json& value, std::string_view field) {
  require(value.is_number(), field, "expected a number");
  const double v = value.get<double>();
  require(std::isfinite(v), field, "must be finite");
  return v;
}

LambdaMode parse_lambda_mode(const json& value) {
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    require(s == "uniform_random" || s == "uniform", "lambda_mode",
            "expected \"uniform_random\" or {\"fixed\": value}");
    return LambdaMode::uniform();
  }
  require(value.is_object() && value.size() == 1 && value.contains("fixed"), "lambda_mode",
          "expected \"uniform_random\" or {\"fixed\": value}");
  return LambdaMode::fixed(as_number(value.at("fixed"), "lambda_mode.fixed"));
}

OpinionInit parse_initial_opinion(const json& value) {
  require(value.is_object() && value.contains("mode"), "initial_opinion",
          "expected an object with a \"mode\" key");
  const auto mode = value.at("mode").get<std::string>();
  for (const auto& [key, _] : value.items()) {
    const bool known = key == "mode" ||
                       (mode == "truncated_normal" && (key == "mean" || key == "std")) ||
                       (mode == "all_fixed" && key == "value") ||
                       (mode == "explicit" && key == "values");
    require(known, "initial_opinion." + key, "unknown key for mode " + mode);
  }
  if (mode == "truncated_normal") {
    TruncatedNormal tn;
    if (value.contains("mean")) tn.mean = as_number(value.at("mean"), "initial_opinion.mean");
    if (value.contains("std")) tn.std = as_number(value.at("std"), "initial_opinion.std");
    return tn;
  }
  if (mode == "all_fixed") {
    AllFixed fixed;
    if (value.contains("value")) fixed.value = as_number(value.at("value"), "initial_opinion.value");
    return fixed;
  }
  if (mode == "explicit") {
    require(value.contains("values") && value.at("values").is_array(), "initial_opinion.values",
            "expected an array");
    ExplicitOpinions ex;
    for (const auto& v : value.at("values")) ex.values.push_back(as_number(v, "initial_opinion.values"));
    return ex;
  }
  throw ConfigError("initial_opinion.mode",
                    "expected truncated_normal, all_fixed or explicit, got " + mode);
}

json opinion_init_to_json(const OpinionInit& init) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TruncatedNormal>) {
          return {{"mode", "truncated_normal"}, {"mean", m.mean}, {"std", m.std}};
        } else if constexpr (std::is_same_v<T, AllFixed>) {
          return {{"mode", "all_fixed"}, {"value", m.value}};
        } else {
          return {{"mode", "explicit"}, {"values", m.values}};
        }
      },
      init);
}

}  // namespace

bool is_param_name(std::string_view name) {
  const auto match = [&](const auto& f) { return f.name == name; };
  return name == kLambdaFixed || std::ranges::any_of(kDoubleFields, match) ||
         std::ranges::any_of(kIntFields, match) || std::ranges::any_of(kOptionalFields, match);
}

std::vector<std::string> param_names() {
  std::vector<std::string> names;
  for (const auto& f : kIntFields) names.emplace_back(f.name);
  for (const auto& f : kDoubleFields) names.emplace_back(f.name);
  for (const auto& f : kOptionalFields) names.emplace_back(f.name);
  names.emplace_back(kLambdaFixed);
  return names;
}

void set_param(ModelParams& params, std::string_view name, double value) {
  require(std::isfinite(value), name, "must be finite");
  for (const auto& f : kDoubleFields) {
    if (f.name == name) {
      params.*f.member = value;
      return;
    }
  }
  for (const auto& f : kIntFields) {
    if (f.name == name) {
      require(value == std::floor(value) && std::abs(value) < 1e9, name, "must be an integer");
      params.*f.member = static_cast<int>(value);
      return;
    }
  }
  for (const auto& f : kOptionalFields) {
    if (f.name == name) {
      params.*f.member = value;
      return;
    }
  }
  if (name == kLambdaFixed) {
    params.lambda_mode = LambdaMode::fixed(value);
    return;
  }
  throw ConfigError(std::string(name), "unknown parameter name");
}

double get_param(const ModelParams& params, std::string_view name) {
  for (const auto& f : kDoubleFields)
    if (f.name == name) return params.*f.member;
  for (const auto& f : kIntFields)
    if (f.name == name) return params.*f.member;
  for (const auto& f : kOptionalFields) {
    if (f.name == name) {
      const auto& v = params.*f.member;
      return v ? *v : std::nan("");
    }
  }
  if (name == kLambdaFixed) {
    return params.lambda_mode.kind == LambdaMode::Kind::fixed ? params.lambda_mode.value
                                                               : std::nan("");
  }
  throw ConfigError(std::string(name), "unknown parameter name");
}

void validate(const ModelParams& p) {
  require(p.k_neighbors >= 1, "k_neighbors", "must be >= 1");
  require(p.n_agents >= p.k_neighbors + 1, "n_agents", "must be >= k_neighbors + 1");
  require(p.a_influence > 0, "a_influence", "must be > 0");
  require(p.psi > 0 && p.psi <= 1, "psi", "must lie in (0, 1]");
  require(p.noise_sigma >= 0, "noise_sigma", "must be >= 0");
  require(p.death_rate >= 0 && p.death_rate < 1, "death_rate", "must lie in [0, 1)");
  require(p.m_cost >= 0, "m_cost", "must be >= 0");
  require(p.r_max >= 0, "r_max", "must be >= 0");
  require(p.t_ref > 0, "t_ref", "must be > 0");
  require(p.c0 > 0, "c0", "must be > 0");
  require(p.f2x > 0, "f2x", "must be > 0");
  require(p.d1 > 0, "d1", "must be > 0");
  require(p.d2 > 0, "d2", "must be > 0");
  require(p.e0 >= 0, "e0", "must be >= 0");
  require(p.delta > 0 && p.delta < 1, "delta", "must lie in (0, 1)");
  require(p.horizon_years >= 0, "horizon_years", "must be >= 0");
  if (p.lambda_mode.kind == LambdaMode::Kind::fixed) {
    require(p.lambda_mode.value >= 0 && p.lambda_mode.value <= 1, "lambda_mode",
            "fixed susceptibility must lie in [0, 1]");
  }
  if (p.emission_display_scale) {
    require(*p.emission_display_scale > 0, "emission_display_scale", "must be > 0");
  }
  if (p.initial_carbon) require(*p.initial_carbon >= 0, "initial_carbon", "must be >= 0");
  for (const auto& f : kDoubleFields) require(std::isfinite(p.*f.member), f.name, "must be finite");
}

void validate(const ScenarioConfig& config) {
  validate(config.params);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TruncatedNormal>) {
          require(m.std > 0, "initial_opinion.std", "must be > 0");
          require(m.mean >= -1 && m.mean <= 1, "initial_opinion.mean", "must lie in [-1, 1]");
        } else if constexpr (std::is_same_v<T, AllFixed>) {
          require(m.value >= -1 && m.value <= 1, "initial_opinion.value", "must lie in [-1, 1]");
        } else {
          require(m.values.size() == static_cast<std::size_t>(config.params.n_agents),
                  "initial_opinion.values", "length must equal n_agents");
          require(std::ranges::all_of(m.values, [](double v) { return v >= -1 && v <= 1; }),
                  "initial_opinion.values", "entries must lie in [-1, 1]");
        }
      },
      config.initial_opinion);
  require(config.strong_threshold > 0 && config.strong_threshold < 1, "strong_threshold",
          "must lie in (0, 1)");
  for (const auto& [name, _] : config.overrides) {
    require(is_param_name(name), "overrides." + name, "unknown parameter name");
  }
}

void apply_override(ScenarioConfig& config, std::string_view name, double value) {
  if (!is_param_name(name)) {
    throw ConfigError("overrides." + std::string(name), "unknown parameter name");
  }
  set_param(config.params, name, value);
  config.overrides.emplace_back(std::string(name), value);
  validate(config);
}

ScenarioConfig load_config(std::string_view text) {
  ScenarioConfig config;
  const bool blank = std::ranges::all_of(text, [](unsigned char c) { return std::isspace(c); });
  if (blank) return config;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config document: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config document must be a JSON object");

  std::vector<std::pair<std::string, double>> overrides;
  try {
  for (const auto& [key, value] : doc.items()) {
    if (key == "sweep" || key == "calibration") continue;
    if (key == "lambda_mode") {
      config.params.lambda_mode = parse_lambda_mode(value);
    } else if (key == "initial_opinion") {
      config.initial_opinion = parse_initial_opinion(value);
    } else if (key == "seed") {
      require(value.is_number_unsigned() || (value.is_number_integer() && value.get<long long>() >= 0),
              "seed", "must be a non-negative integer");
      config.seed = value.get<std::uint64_t>();
    } else if (key == "snapshot_years") {
      require(value.is_array(), "snapshot_years", "expected an array of years");
      config.snapshot_years.clear();
      for (const auto& y : value) {
        require(y.is_number_integer(), "snapshot_years", "years must be integers");
        config.snapshot_years.push_back(y.get<int>());
      }
    } else if (key == "strong_threshold") {
      config.strong_threshold = as_number(value, key);
    } else if (key == "overrides") {
      if (value.is_object()) {
        for (const auto& [name, v] : value.items()) overrides.emplace_back(name, as_number(v, name));
      } else {
        require(value.is_array(), "overrides", "expected an object or a list of [name, value]");
        for (const auto& pair : value) {
          require(pair.is_array() && pair.size() == 2 && pair[0].is_string(), "overrides",
                  "entries must be [name, value]");
          const auto name = pair[0].get<std::string>();
          overrides.emplace_back(name, as_number(pair[1], name));
        }
      }
    } else if (is_param_name(key) && key != kLambdaFixed) {
      if (value.is_null()) {
        const auto opt = std::ranges::find(kOptionalFields, key, &OptionalField::name);
        require(opt != kOptionalFields.end(), key, "must not be null");
        config.params.*(opt->member) = std::nullopt;
      } else {
        set_param(config.params, key, as_number(value, key));
      }
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("invalid config value: ") + e.what());
  }
  validate(config);
  for (const auto& [name, value] : overrides) apply_override(config, name, value);
  return config;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str());
}

std::string to_config_text(const ScenarioConfig& config) {
  const auto& p = config.params;
  json doc = json::object();
  for (const auto& f : kIntFields) doc[std::string(f.name)] = p.*f.member;
  for (const auto& f : kDoubleFields) doc[std::string(f.name)] = p.*f.member;
  for (const auto& f : kOptionalFields) {
    const auto& v = p.*f.member;
    doc[std::string(f.name)] = v ? json(*v) : json(nullptr);
  }
  doc["lambda_mode"] = p.lambda_mode.kind == LambdaMode::Kind::fixed
                           ? json{{"fixed", p.lambda_mode.value}}
                           : json("uniform_random");
  doc["initial_opinion"] = opinion_init_to_json(config.initial_opinion);
  doc["seed"] = config.seed;
  doc["snapshot_years"] = config.snapshot_years;
  doc["strong_threshold"] = config.strong_threshold;
  json overrides = json::array();
  for (const auto& [name, value] : config.overrides) overrides.push_back({name, value});
  doc["overrides"] = overrides;
  return doc.dump(2);
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
  return mix64(master_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace opclim
