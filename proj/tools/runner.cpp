#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mamax/serialize.hpp"

namespace mamax::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SweepSpec sweep_for(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::RateVsAntennas:
      return {SweepKind::NumAntennas, cfg.sweep_values};
    case ExperimentKind::RateVsPaths:
      return {SweepKind::PathsPerUser, cfg.sweep_values};
    default:
      return {};
  }
}

// Scenario actually used by one trial: the swept parameter and the per-trial
// seed applied to the base scenario. Must mirror the trial loop exactly; the
// audit recompute closes the loop on that.
ScenarioConfig trial_scenario(const RunConfig& cfg, const TrialResult& trial) {
  ScenarioConfig scenario = cfg.scenario;
  if (cfg.experiment == ExperimentKind::RateVsAntennas) scenario.num_antennas = trial.sweep_value;
  if (cfg.experiment == ExperimentKind::RateVsPaths) scenario.paths_per_user = trial.sweep_value;
  scenario.rng_seed = trial.seed;
  return scenario;
}

json pso_to_value(const PsoParams& p) {
  return json{{"swarm_size", p.swarm_size},
              {"max_iters", p.max_iters},
              {"cognitive", p.cognitive},
              {"social", p.social},
              {"inertia_start", p.inertia_start},
              {"inertia_end", p.inertia_end},
              {"penalty_weight", p.penalty_weight},
              {"rate_tol", p.rate_tol},
              {"bisect_tol", p.bisect_tol},
              {"per_component_draws", p.per_component_draws},
              {"sequential_best_update", p.sequential_best_update},
              {"threads", p.threads}};
}

void write_manifest(const RunConfig& cfg, const fs::path& path) {
  json schemes = json::array();
  for (SchemeKind s : cfg.schemes) schemes.push_back(to_string(s));
  json manifest{{"format_version", 1},
                {"experiment", to_string(cfg.experiment)},
                {"scale", cfg.scale},
                {"schemes", schemes},
                {"num_trials", cfg.num_trials},
                {"sweep_values", cfg.sweep_values},
                {"root_seed", cfg.scenario.rng_seed},
                {"scenario", json::parse(to_json(cfg.scenario))},
                {"pso", pso_to_value(cfg.pso)},
                {"outputs",
                 {{"results", "results.csv"}, {"trials_dir", "trials"}, {"traces_dir", "traces"}}}};
  std::ofstream out(path);
  out << manifest.dump(2) << "\n";
}

std::string trial_stem(const TrialResult& trial) {
  return to_string(trial.scheme) + "_" + std::to_string(trial.sweep_value) + "_" +
         std::to_string(trial.trial_index);
}

void write_trial_record(const RunConfig& cfg, const TrialResult& trial, const fs::path& dir) {
  json apv = json::array();
  for (const auto& pos : trial.apv) apv.push_back({pos.x, pos.y});
  json record{{"scheme", to_string(trial.scheme)},
              {"trial_seed", trial.seed},
              {"trial_index", trial.trial_index},
              {"sweep_value", trial.sweep_value},
              {"min_rate_bps_hz", trial.min_rate},
              {"rate_tol", cfg.pso.rate_tol},
              {"bisect_tol", cfg.pso.bisect_tol},
              {"apv", apv},
              {"scenario", json::parse(to_json(trial_scenario(cfg, trial)))}};
  std::ofstream out(dir / (trial_stem(trial) + ".json"));
  out << record.dump(2) << "\n";
}

void write_trace(const TrialResult& trial, const fs::path& dir) {
  std::ofstream out(dir / (trial_stem(trial) + ".csv"));
  out << "iteration,gbest_fitness,penalty_count\n";
  for (const auto& rec : trial.trace)
    out << rec.iteration << "," << fmt(rec.best_fitness) << "," << rec.penalty_count << "\n";
}

int audit_records(const std::vector<fs::path>& records, std::ostream& log) {
  int mismatches = 0;
  for (const auto& path : records) {
    std::ifstream in(path);
    json record = json::parse(in);
    ScenarioConfig scenario = scenario_config_from_json(record.at("scenario").dump());
    AntennaPositioningVector apv;
    for (const auto& pair : record.at("apv"))
      apv.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    ScenarioInstance instance = generate_scenario(scenario);
    InnerSolution inner = bcd_solve(apv, instance, record.at("rate_tol").get<double>(),
                                    record.at("bisect_tol").get<double>());
    double recorded = record.at("min_rate_bps_hz").get<double>();
    if (std::abs(inner.min_rate - recorded) > 1e-9) {
      ++mismatches;
      log << "audit mismatch: " << path.filename().string() << " recorded " << fmt(recorded)
          << " recomputed " << fmt(inner.min_rate) << "\n";
    }
  }
  log << "audit: " << records.size() - static_cast<std::size_t>(mismatches) << "/"
      << records.size() << " records verified\n";
  return mismatches;
}

}  // namespace

int run(const RunConfig& cfg, bool audit, std::ostream& log) {
  cfg.validate();
  const fs::path out_dir(cfg.output_dir);
  const fs::path trials_dir = out_dir / "trials";
  const fs::path traces_dir = out_dir / "traces";
  fs::create_directories(trials_dir);
  const bool want_traces = cfg.experiment == ExperimentKind::Convergence;
  if (want_traces) fs::create_directories(traces_dir);

  write_manifest(cfg, out_dir / "manifest.json");

  std::ofstream results(out_dir / "results.csv");
  results << "experiment,scheme,sweep_value,trial_seed,min_rate_bps_hz,penalty_count,iterations,"
             "wall_time_s\n";

  int failures = 0;
  bool weight_warned = false;
  std::vector<fs::path> records;
  auto on_trial = [&](const TrialResult& trial) {
    results << to_string(cfg.experiment) << "," << to_string(trial.scheme) << ","
            << trial.sweep_value << "," << trial.seed << "," << fmt(trial.min_rate) << ","
            << trial.penalty_count << "," << trial.iterations << "," << fmt(trial.wall_time_s)
            << "\n";
    results.flush();
    if (trial.failed) {
      ++failures;
      log << "trial failed: scheme=" << to_string(trial.scheme)
          << " sweep=" << trial.sweep_value << " index=" << trial.trial_index << ": "
          << trial.error << "\n";
      return;
    }
    if (trial.penalty_weight_raised && !weight_warned) {
      weight_warned = true;
      log << "warning: penalty weight raised to " << fmt(trial.penalty_weight_used)
          << " so that one violation always outweighs the attainable rate\n";
    }
    write_trial_record(cfg, trial, trials_dir);
    records.push_back(trials_dir / (trial_stem(trial) + ".json"));
    if (want_traces && trial.scheme == SchemeKind::MovableOptimized) write_trace(trial, traces_dir);
  };

  MonteCarloResult mc =
      monte_carlo(cfg.scenario, cfg.schemes, cfg.pso, cfg.num_trials, sweep_for(cfg), on_trial);

  for (const auto& row : mc.summary) {
    log << to_string(row.scheme) << " sweep=" << row.sweep_value
        << " mean_min_rate=" << fmt(row.mean_min_rate) << " stderr=" << fmt(row.stderr_min_rate)
        << " trials=" << row.completed << "\n";
  }

  int mismatches = audit ? audit_records(records, log) : 0;
  return failures > 0 || mismatches > 0 ? 2 : 0;
}

}  // namespace mamax::cli
