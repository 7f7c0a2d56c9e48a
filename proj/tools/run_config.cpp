#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mamax::cli {

namespace {

using nlohmann::json;

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known) throw ConfigError("unknown key " + where + "." + item.key());
  }
}

template <typename T>
T get_as(const json& obj, const std::string& where, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key ") + where + "." + key + " has the wrong type");
  }
}

void parse_scenario(const json& obj, ScenarioConfig& cfg) {
  expect_keys(obj,
              {"num_users", "num_antennas", "paths_per_user", "wavelength", "region_size",
               "min_dist", "p_max", "noise_power", "pathloss_ref", "pathloss_exp", "distance_min",
               "distance_max", "rng_seed"},
              "scenario");
  if (!obj.contains("num_users")) throw ConfigError("missing required key scenario.num_users");
  if (!obj.contains("num_antennas"))
    throw ConfigError("missing required key scenario.num_antennas");
  cfg.num_users = get_as<int>(obj, "scenario", "num_users", cfg.num_users);
  cfg.num_antennas = get_as<int>(obj, "scenario", "num_antennas", cfg.num_antennas);
  cfg.paths_per_user = get_as<int>(obj, "scenario", "paths_per_user", cfg.paths_per_user);
  cfg.wavelength = get_as<double>(obj, "scenario", "wavelength", cfg.wavelength);
  cfg.region_size = get_as<double>(obj, "scenario", "region_size", cfg.region_size);
  cfg.min_dist = get_as<double>(obj, "scenario", "min_dist", cfg.min_dist);
  cfg.p_max = get_as<double>(obj, "scenario", "p_max", cfg.p_max);
  cfg.noise_power = get_as<double>(obj, "scenario", "noise_power", cfg.noise_power);
  cfg.pathloss_ref = get_as<double>(obj, "scenario", "pathloss_ref", cfg.pathloss_ref);
  cfg.pathloss_exp = get_as<double>(obj, "scenario", "pathloss_exp", cfg.pathloss_exp);
  cfg.distance_min = get_as<double>(obj, "scenario", "distance_min", cfg.distance_min);
  cfg.distance_max = get_as<double>(obj, "scenario", "distance_max", cfg.distance_max);
  cfg.rng_seed = get_as<std::uint64_t>(obj, "scenario", "rng_seed", cfg.rng_seed);
}

void parse_pso(const json& obj, PsoParams& pso) {
  expect_keys(obj,
              {"swarm_size", "max_iters", "cognitive", "social", "inertia_start", "inertia_end",
               "penalty_weight", "rate_tol", "bisect_tol", "per_component_draws",
               "sequential_best_update", "threads"},
              "pso");
  pso.swarm_size = get_as<int>(obj, "pso", "swarm_size", pso.swarm_size);
  pso.max_iters = get_as<int>(obj, "pso", "max_iters", pso.max_iters);
  pso.cognitive = get_as<double>(obj, "pso", "cognitive", pso.cognitive);
  pso.social = get_as<double>(obj, "pso", "social", pso.social);
  pso.inertia_start = get_as<double>(obj, "pso", "inertia_start", pso.inertia_start);
  pso.inertia_end = get_as<double>(obj, "pso", "inertia_end", pso.inertia_end);
  pso.penalty_weight = get_as<double>(obj, "pso", "penalty_weight", pso.penalty_weight);
  pso.rate_tol = get_as<double>(obj, "pso", "rate_tol", pso.rate_tol);
  pso.bisect_tol = get_as<double>(obj, "pso", "bisect_tol", pso.bisect_tol);
  pso.per_component_draws =
      get_as<bool>(obj, "pso", "per_component_draws", pso.per_component_draws);
  pso.sequential_best_update =
      get_as<bool>(obj, "pso", "sequential_best_update", pso.sequential_best_update);
  pso.threads = get_as<int>(obj, "pso", "threads", pso.threads);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Single:
      return "single";
    case ExperimentKind::Convergence:
      return "convergence";
    case ExperimentKind::RateVsAntennas:
      return "rate_vs_antennas";
    case ExperimentKind::RateVsPaths:
      return "rate_vs_paths";
  }
  throw ConfigError("unknown experiment");
}

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "single") return ExperimentKind::Single;
  if (name == "convergence") return ExperimentKind::Convergence;
  if (name == "rate_vs_antennas") return ExperimentKind::RateVsAntennas;
  if (name == "rate_vs_paths") return ExperimentKind::RateVsPaths;
  throw ConfigError("unknown experiment: " + name);
}

void RunConfig::validate() const {
  try {
    scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  try {
    pso.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("pso: ") + e.what());
  }
  if (schemes.empty()) throw ConfigError("run.schemes must not be empty");
  if (num_trials < 1) throw ConfigError("run.num_trials must be at least 1");
  if (output_dir.empty()) throw ConfigError("run.output_dir must not be empty");
  if (scale != "desk" && scale != "paper")
    throw ConfigError("run.scale must be \"desk\" or \"paper\"");

  bool sweeping =
      experiment == ExperimentKind::RateVsAntennas || experiment == ExperimentKind::RateVsPaths;
  if (sweeping && sweep_values.empty())
    throw ConfigError("run.sweep_values is required for " + to_string(experiment));
  if (!sweeping && !sweep_values.empty())
    throw ConfigError("run.sweep_values only applies to the sweep experiments");
  if (experiment == ExperimentKind::RateVsAntennas) {
    for (int v : sweep_values)
      if (v < scenario.num_users)
        throw ConfigError("sweep value " + std::to_string(v) + " is below scenario.num_users (" +
                          std::to_string(scenario.num_users) + ")");
  }
  if (experiment == ExperimentKind::RateVsPaths) {
    for (int v : sweep_values)
      if (v < 1) throw ConfigError("paths_per_user sweep values must be at least 1");
  }
}

RunConfig parse_config_text(const std::string& text, const CliOverrides& overrides) {
  std::string trimmed = text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
  json root;
  if (trimmed.empty()) {
    root = json::object();
  } else {
    root = json::parse(text, nullptr, false);
    if (root.is_discarded()) throw ConfigError("configuration is not valid JSON");
  }
  expect_keys(root, {"scenario", "pso", "run"}, "config");

  RunConfig cfg;
  const json run = root.contains("run") ? root.at("run") : json::object();
  expect_keys(run, {"experiment", "schemes", "sweep_values", "num_trials", "output_dir", "scale"},
              "run");

  // The scale profile decides swarm and trial budgets for keys left unset.
  cfg.scale = get_as<std::string>(run, "run", "scale", cfg.scale);
  if (overrides.paper_scale) cfg.scale = "paper";
  if (cfg.scale != "desk" && cfg.scale != "paper")
    throw ConfigError("run.scale must be \"desk\" or \"paper\"");
  const bool paper = cfg.scale == "paper";
  cfg.pso.swarm_size = paper ? 200 : 50;
  cfg.pso.max_iters = paper ? 300 : 100;
  cfg.num_trials = paper ? 1000 : 20;

  parse_scenario(root.contains("scenario") ? root.at("scenario") : json::object(), cfg.scenario);

  if (root.contains("pso")) parse_pso(root.at("pso"), cfg.pso);

  if (run.contains("experiment"))
    cfg.experiment = experiment_from_string(get_as<std::string>(run, "run", "experiment", ""));
  if (run.contains("schemes")) {
    if (!run.at("schemes").is_array()) throw ConfigError("run.schemes must be an array");
    cfg.schemes.clear();
    for (const auto& name : run.at("schemes")) {
      if (!name.is_string()) throw ConfigError("run.schemes entries must be strings");
      try {
        cfg.schemes.push_back(scheme_from_string(name.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (run.contains("sweep_values")) {
    if (!run.at("sweep_values").is_array()) throw ConfigError("run.sweep_values must be an array");
    for (const auto& v : run.at("sweep_values")) {
      if (!v.is_number_integer()) throw ConfigError("run.sweep_values entries must be integers");
      cfg.sweep_values.push_back(v.get<int>());
    }
  }
  cfg.num_trials = get_as<int>(run, "run", "num_trials", cfg.num_trials);
  cfg.output_dir = get_as<std::string>(run, "run", "output_dir", cfg.output_dir);

  if (overrides.experiment) cfg.experiment = experiment_from_string(*overrides.experiment);
  if (overrides.trials) cfg.num_trials = *overrides.trials;
  if (overrides.seed) cfg.scenario.rng_seed = *overrides.seed;
  if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;

  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const CliOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), overrides);
}

}  // namespace mamax::cli
