#include "mamax/schemes.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mamax/parallel.hpp"
#include "mamax/rng.hpp"

namespace mamax {

namespace {

constexpr std::uint64_t kStreamPlacement = 3;  // swarm stream within a trial
constexpr std::uint64_t kStreamTrial = 4;      // per-trial seeds under a root

// Accepting a move requires more than rounding noise worth of improvement.
constexpr double kApsImprovementMargin = 1e-12;

std::vector<double> grid_axis(double region_size, double spacing) {
  int count = static_cast<int>(std::floor(region_size / spacing + 1e-9)) + 1;
  std::vector<double> axis(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) axis[static_cast<std::size_t>(i)] = (i - (count - 1) / 2.0) * spacing;
  return axis;
}

ScenarioConfig swept_config(const ScenarioConfig& base, SweepKind kind, int value) {
  ScenarioConfig cfg = base;
  switch (kind) {
    case SweepKind::None:
      break;
    case SweepKind::NumAntennas:
      cfg.num_antennas = value;
      break;
    case SweepKind::PathsPerUser:
      cfg.paths_per_user = value;
      break;
  }
  return cfg;
}

double sample_stderr(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return sd / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::MovableOptimized:
      return "movable_optimized";
    case SchemeKind::FixedUPA:
      return "fixed_upa";
    case SchemeKind::AlternatingPositionSelection:
      return "alternating_position_selection";
  }
  throw std::invalid_argument("unknown scheme");
}

SchemeKind scheme_from_string(const std::string& name) {
  if (name == "movable_optimized") return SchemeKind::MovableOptimized;
  if (name == "fixed_upa") return SchemeKind::FixedUPA;
  if (name == "alternating_position_selection") return SchemeKind::AlternatingPositionSelection;
  throw std::invalid_argument("unknown scheme: " + name);
}

ApsResult aps_solve(const ScenarioInstance& scenario, double rate_tol, double bisect_tol,
                    int threads, int max_sweeps) {
  const ScenarioConfig& cfg = scenario.config;
  cfg.validate();
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be at least 1");

  std::vector<double> axis = grid_axis(cfg.region_size, cfg.wavelength / 2.0);
  const int per_axis = static_cast<int>(axis.size());
  if (per_axis * per_axis < cfg.num_antennas)
    throw std::invalid_argument("selection grid cannot hold all antennas");

  std::vector<AntennaPosition> grid;
  grid.reserve(static_cast<std::size_t>(per_axis * per_axis));
  for (double y : axis)
    for (double x : axis) grid.push_back({x, y});

  ApsResult result;
  result.apv = fpa_apv(cfg);
  double best_rate = bcd_solve(result.apv, scenario, rate_tol, bisect_tol).min_rate;

  const int m_total = cfg.num_antennas;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool moved = false;
    for (int m = 0; m < m_total; ++m) {
      // Candidate points: unoccupied and not within min_dist of any other
      // antenna. The current position evaluates to the incumbent rate, so it
      // never wins under the strict margin.
      std::vector<AntennaPosition> candidates;
      for (const auto& point : grid) {
        bool usable = true;
        for (int i = 0; i < m_total && usable; ++i) {
          if (i == m) continue;
          const auto& other = result.apv[static_cast<std::size_t>(i)];
          if (other.x == point.x && other.y == point.y) usable = false;
          else if (std::hypot(other.x - point.x, other.y - point.y) < cfg.min_dist) usable = false;
        }
        if (usable) candidates.push_back(point);
      }

      std::vector<double> rates(candidates.size());
      parallel_for(static_cast<int>(candidates.size()), threads, [&](int c) {
        AntennaPositioningVector trial = result.apv;
        trial[static_cast<std::size_t>(m)] = candidates[static_cast<std::size_t>(c)];
        rates[static_cast<std::size_t>(c)] = bcd_solve(trial, scenario, rate_tol, bisect_tol).min_rate;
      });

      int winner = -1;
      double winner_rate = best_rate;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (rates[c] > winner_rate + kApsImprovementMargin) {
          winner = static_cast<int>(c);
          winner_rate = rates[c];
        }
      }
      if (winner >= 0) {
        result.apv[static_cast<std::size_t>(m)] = candidates[static_cast<std::size_t>(winner)];
        best_rate = winner_rate;
        ++result.moves;
        moved = true;
      }
    }
    result.sweeps = sweep + 1;
    if (!moved) break;
  }

  result.inner = bcd_solve(result.apv, scenario, rate_tol, bisect_tol);
  return result;
}

TrialResult run_trial(const ScenarioConfig& config, SchemeKind scheme, const PsoParams& pso) {
  TrialResult trial;
  trial.scheme = scheme;
  trial.seed = config.rng_seed;
  auto start = std::chrono::steady_clock::now();
  try {
    ScenarioInstance instance = generate_scenario(config);
    InnerSolution inner;
    switch (scheme) {
      case SchemeKind::FixedUPA: {
        trial.apv = fpa_apv(config);
        inner = bcd_solve(trial.apv, instance, pso.rate_tol, pso.bisect_tol);
        break;
      }
      case SchemeKind::AlternatingPositionSelection: {
        ApsResult aps = aps_solve(instance, pso.rate_tol, pso.bisect_tol, pso.threads);
        trial.apv = aps.apv;
        inner = std::move(aps.inner);
        break;
      }
      case SchemeKind::MovableOptimized: {
        PsoParams effective = pso;
        effective.rng_seed = derive_seed(config.rng_seed, {kStreamPlacement});
        PsoResult res = pso_solve(instance, effective);
        trial.apv = res.apv;
        trial.penalty_weight_used = res.penalty_weight_used;
        trial.penalty_weight_raised = res.penalty_weight_raised;
        inner = std::move(res.inner);
        trial.trace.reserve(res.state.fitness_trace.size());
        for (std::size_t i = 0; i < res.state.fitness_trace.size(); ++i)
          trial.trace.push_back({static_cast<int>(i), res.state.fitness_trace[i],
                                 res.state.penalty_trace[i]});
        break;
      }
    }
    trial.min_rate = inner.min_rate;
    trial.iterations = inner.iterations;
    trial.penalty_count = violation_set(trial.apv, config.min_dist).count();
  } catch (const std::exception& e) {
    trial.failed = true;
    trial.error = e.what();
  }
  trial.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trial;
}

std::uint64_t trial_seed(std::uint64_t root_seed, int trial_index) {
  return derive_seed(root_seed, {kStreamTrial, static_cast<std::uint64_t>(trial_index)});
}

MonteCarloResult monte_carlo(const ScenarioConfig& config, const std::vector<SchemeKind>& schemes,
                             const PsoParams& pso, int num_trials, const SweepSpec& sweep,
                             const std::function<void(const TrialResult&)>& on_trial) {
  if (num_trials < 1) throw std::invalid_argument("num_trials must be at least 1");
  if (schemes.empty()) throw std::invalid_argument("at least one scheme is required");
  if (sweep.kind != SweepKind::None && sweep.values.empty())
    throw std::invalid_argument("sweep requires at least one value");

  std::vector<int> values = sweep.kind == SweepKind::None ? std::vector<int>{0} : sweep.values;
  for (int v : values) swept_config(config, sweep.kind, v).validate();

  MonteCarloResult result;
  result.trials.reserve(values.size() * schemes.size() * static_cast<std::size_t>(num_trials));
  for (int value : values) {
    ScenarioConfig cfg = swept_config(config, sweep.kind, value);
    for (SchemeKind scheme : schemes) {
      std::vector<double> rates;
      rates.reserve(static_cast<std::size_t>(num_trials));
      for (int i = 0; i < num_trials; ++i) {
        cfg.rng_seed = trial_seed(config.rng_seed, i);
        TrialResult trial = run_trial(cfg, scheme, pso);
        trial.trial_index = i;
        trial.sweep_value = sweep.kind == SweepKind::None ? 0 : value;
        if (!trial.failed) rates.push_back(trial.min_rate);
        if (on_trial) on_trial(trial);
        result.trials.push_back(std::move(trial));
      }
      AggregateRow row;
      row.scheme = scheme;
      row.sweep_value = sweep.kind == SweepKind::None ? 0 : value;
      row.completed = static_cast<int>(rates.size());
      if (!rates.empty()) {
        double sum = 0.0;
        for (double r : rates) sum += r;
        row.mean_min_rate = sum / static_cast<double>(rates.size());
        row.stderr_min_rate = sample_stderr(rates, row.mean_min_rate);
      }
      result.summary.push_back(row);
    }
  }
  return result;
}

}  // namespace mamax
