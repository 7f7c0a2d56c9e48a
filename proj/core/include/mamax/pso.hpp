#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mamax/channel.hpp"
#include "mamax/inner_solver.hpp"
#include "mamax/rng.hpp"
#include "mamax/scenario.hpp"

namespace mamax {

struct PsoParams {
  int swarm_size = 200;        // N
  int max_iters = 300;         // T
  double cognitive = 1.4;      // pull toward a particle's own best
  double social = 1.4;         // pull toward the swarm best
  double inertia_start = 0.9;  // linear schedule over iterations
  double inertia_end = 0.4;
  double penalty_weight = 10.0;  // rate penalty per violating antenna pair
  double rate_tol = 1e-3;        // inner-solver convergence threshold
  double bisect_tol = 1e-3;      // inner bisection bracket width
  std::uint64_t rng_seed = 1;
  // Independent multipliers per velocity component (default), or one shared
  // draw per update as an ablation.
  bool per_component_draws = true;
  // Evaluate and adopt bests particle by particle inside an iteration instead
  // of batching; later particles then see bests updated earlier in the same
  // iteration. Batched mode is the default and is what the thread option
  // parallelizes.
  bool sequential_best_update = false;
  int threads = 1;

  void validate() const;  // throws std::invalid_argument
};

struct Particle {
  Eigen::VectorXd position;  // flat [x0, y0, x1, y1, ...]
  Eigen::VectorXd velocity;
  Eigen::VectorXd best_position;
  double best_fitness = 0.0;
};

struct SwarmState {
  std::vector<Particle> particles;
  Eigen::VectorXd global_best_position;
  double global_best_fitness = 0.0;
  int iteration = 0;  // completed update iterations
  // Swarm-best fitness after initialization (entry 0) and after each
  // iteration; non-decreasing by construction.
  std::vector<double> fitness_trace;
  std::vector<Eigen::VectorXd> best_position_trace;  // parallel to fitness_trace
  // Violating-pair count of the swarm best, parallel to fitness_trace.
  // Filled by pso_solve; the generic optimizer leaves it empty.
  std::vector<int> penalty_trace;
};

using FitnessFn = std::function<double(const Eigen::VectorXd&)>;

// One velocity update in exact arithmetic order: inertia term, then the
// component-wise weighted pulls toward the particle and swarm bests.
Eigen::VectorXd velocity_step(const Eigen::VectorXd& velocity, const Eigen::VectorXd& position,
                              const Eigen::VectorXd& best_position,
                              const Eigen::VectorXd& global_best, double inertia, double cognitive,
                              double social, const Eigen::VectorXd& tau1,
                              const Eigen::VectorXd& tau2);

// Draws the stochastic multipliers from rng (two per component, or two total
// with scalar draws) and applies velocity_step in place.
void update_velocity(Particle& particle, const Eigen::VectorXd& global_best, double inertia,
                     const PsoParams& params, Rng& rng);

// Moves the particle by its velocity and clamps every component to
// [-region_size/2, region_size/2]. Velocity is left unclamped.
void update_position(Particle& particle, double region_size);

// Uniform random positions and velocities in [-region_size/2, region_size/2]
// per component, evaluated with `fitness`; the swarm best is the argmax with
// ties broken toward the lowest particle index. Each particle draws from its
// own seed-derived stream, so growing the swarm keeps existing particles'
// draws unchanged.
SwarmState init_swarm(const PsoParams& params, int num_antennas, double region_size,
                      const FitnessFn& fitness);

// Full optimizer loop: init_swarm, then max_iters iterations of velocity and
// position updates followed by best replacement (strictly greater fitness
// only). Inertia decays linearly from inertia_start to inertia_end across
// iteration indices 0..max_iters-1.
SwarmState swarm_optimize(const PsoParams& params, int num_antennas, double region_size,
                          const FitnessFn& fitness);

// Antenna pairs closer than min_dist (strictly), indices ordered m < i.
struct PenaltyReport {
  std::vector<std::pair<int, int>> violating_pairs;
  int count() const { return static_cast<int>(violating_pairs.size()); }
};

PenaltyReport violation_set(const AntennaPositioningVector& apv, double min_dist);

double apply_penalty(double min_rate, int violation_count, double penalty_weight);

// Objective the swarm maximizes: inner-solver max-min rate at this APV minus
// penalty_weight per violating pair. Feasible APVs score exactly their rate.
double penalized_fitness(const AntennaPositioningVector& apv, const ScenarioInstance& scenario,
                         const PsoParams& params);

struct PsoResult {
  AntennaPositioningVector apv;  // best placement found
  InnerSolution inner;           // inner solve at that placement
  SwarmState state;
  PenaltyReport final_penalty;
  // Penalty weight actually used: raised above an upper bound on the
  // attainable rate when the configured weight could not dominate it.
  double penalty_weight_used = 0.0;
  bool penalty_weight_raised = false;
  int nonconverged_evals = 0;  // inner solves that hit their iteration cap
};

// Antenna-placement search for one scenario draw: maximizes penalized_fitness
// over the region with the swarm optimizer, then re-solves the inner problem
// at the returned placement.
PsoResult pso_solve(const ScenarioInstance& scenario, const PsoParams& params);

}  // namespace mamax
