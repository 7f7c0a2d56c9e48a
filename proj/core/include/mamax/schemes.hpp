#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mamax/inner_solver.hpp"
#include "mamax/pso.hpp"
#include "mamax/scenario.hpp"

namespace mamax {

enum class SchemeKind {
  MovableOptimized,             // swarm search over continuous positions
  FixedUPA,                     // half-wavelength rectangular grid, no motion
  AlternatingPositionSelection  // greedy per-antenna moves on a discrete grid
};

std::string to_string(SchemeKind kind);
SchemeKind scheme_from_string(const std::string& name);

struct ApsResult {
  AntennaPositioningVector apv;
  InnerSolution inner;
  int moves = 0;   // accepted relocations
  int sweeps = 0;  // passes over the antennas
};

// Greedy discrete placement: starting from the fixed grid layout, sweep the
// antennas in index order and move each to the half-wavelength grid point
// that strictly improves the inner objective the most, skipping occupied
// points and points closer than min_dist to another antenna. Stops after a
// sweep with no accepted move, or after max_sweeps.
ApsResult aps_solve(const ScenarioInstance& scenario, double rate_tol, double bisect_tol,
                    int threads = 1, int max_sweeps = 5);

struct TraceRecord {
  int iteration = 0;
  double best_fitness = 0.0;
  int penalty_count = 0;
};

struct TrialResult {
  SchemeKind scheme = SchemeKind::FixedUPA;
  std::uint64_t seed = 0;
  int trial_index = 0;
  int sweep_value = 0;  // swept parameter value; 0 when nothing is swept
  double min_rate = 0.0;
  int iterations = 0;  // inner-solver iterations at the final placement
  int penalty_count = 0;
  double wall_time_s = 0.0;
  // Movable-optimized only: the penalty weight the search actually used, and
  // whether it had to be raised above the configured value to stay dominant.
  double penalty_weight_used = 0.0;
  bool penalty_weight_raised = false;
  AntennaPositioningVector apv;
  std::vector<TraceRecord> trace;  // filled for MovableOptimized only
  bool failed = false;
  std::string error;
};

// One scenario draw from config.rng_seed solved with one scheme. The same
// seed yields the same instance for every scheme, so per-seed comparisons are
// paired. Solver errors are captured in failed/error, not thrown.
TrialResult run_trial(const ScenarioConfig& config, SchemeKind scheme, const PsoParams& pso);

enum class SweepKind { None, NumAntennas, PathsPerUser };

struct SweepSpec {
  SweepKind kind = SweepKind::None;
  std::vector<int> values;
};

struct AggregateRow {
  SchemeKind scheme = SchemeKind::FixedUPA;
  int sweep_value = 0;
  int completed = 0;  // trials that did not fail
  double mean_min_rate = 0.0;
  double stderr_min_rate = 0.0;
};

struct MonteCarloResult {
  std::vector<TrialResult> trials;
  std::vector<AggregateRow> summary;
};

// Seed of trial `index` under a root seed. Pure function of (root, index), so
// extending a run reproduces all earlier trials.
std::uint64_t trial_seed(std::uint64_t root_seed, int trial_index);

// num_trials independent draws per scheme and sweep value. Trials are paired:
// trial i uses the same derived seed at every (scheme, sweep value). Sweep
// configs are validated up front; per-trial failures are recorded in the
// results instead of aborting the run. on_trial, when set, observes each
// trial as it completes (for streaming output).
MonteCarloResult monte_carlo(const ScenarioConfig& config, const std::vector<SchemeKind>& schemes,
                             const PsoParams& pso, int num_trials, const SweepSpec& sweep = {},
                             const std::function<void(const TrialResult&)>& on_trial = {});

}  // namespace mamax
