#include "mamax/pso.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mamax/parallel.hpp"

namespace mamax {

namespace {

// Stream labels for seed derivation; fixed so that stored seeds stay
// reproducible across versions.
constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamVelocity = 2;

void check_domain(int num_antennas, double region_size) {
  if (num_antennas < 1) throw std::invalid_argument("num_antennas must be at least 1");
  if (!(region_size > 0.0)) throw std::invalid_argument("region_size must be positive");
}

// Literal best-replacement order: particle best first, then swarm best from
// the particle best. Strict inequalities keep incumbents on ties.
void adopt_if_better(Particle& particle, double fitness, SwarmState& state) {
  if (fitness > particle.best_fitness) {
    particle.best_fitness = fitness;
    particle.best_position = particle.position;
  }
  if (particle.best_fitness > state.global_best_fitness) {
    state.global_best_fitness = particle.best_fitness;
    state.global_best_position = particle.best_position;
  }
}

void record_trace(SwarmState& state) {
  state.fitness_trace.push_back(state.global_best_fitness);
  state.best_position_trace.push_back(state.global_best_position);
}

}  // namespace

void PsoParams::validate() const {
  if (swarm_size < 1) throw std::invalid_argument("swarm_size must be at least 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(cognitive >= 0.0)) throw std::invalid_argument("cognitive weight must be nonnegative");
  if (!(social >= 0.0)) throw std::invalid_argument("social weight must be nonnegative");
  if (!(inertia_end >= 0.0)) throw std::invalid_argument("inertia_end must be nonnegative");
  if (!(inertia_start >= inertia_end))
    throw std::invalid_argument("inertia_start must be at least inertia_end");
  if (!(penalty_weight > 0.0)) throw std::invalid_argument("penalty_weight must be positive");
  if (!(rate_tol > 0.0)) throw std::invalid_argument("rate_tol must be positive");
  if (!(bisect_tol > 0.0)) throw std::invalid_argument("bisect_tol must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

Eigen::VectorXd velocity_step(const Eigen::VectorXd& velocity, const Eigen::VectorXd& position,
                              const Eigen::VectorXd& best_position,
                              const Eigen::VectorXd& global_best, double inertia, double cognitive,
                              double social, const Eigen::VectorXd& tau1,
                              const Eigen::VectorXd& tau2) {
  return inertia * velocity +
         cognitive * tau1.cwiseProduct(best_position - position) +
         social * tau2.cwiseProduct(global_best - position);
}

void update_velocity(Particle& particle, const Eigen::VectorXd& global_best, double inertia,
                     const PsoParams& params, Rng& rng) {
  const Eigen::Index dim = particle.position.size();
  Eigen::VectorXd tau1(dim), tau2(dim);
  if (params.per_component_draws) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      tau1[i] = rng.uniform();
      tau2[i] = rng.uniform();
    }
  } else {
    tau1.setConstant(rng.uniform());
    tau2.setConstant(rng.uniform());
  }
  particle.velocity = velocity_step(particle.velocity, particle.position, particle.best_position,
                                    global_best, inertia, params.cognitive, params.social, tau1,
                                    tau2);
}

void update_position(Particle& particle, double region_size) {
  const double half = region_size / 2.0;
  particle.position += particle.velocity;
  for (Eigen::Index i = 0; i < particle.position.size(); ++i)
    particle.position[i] = std::clamp(particle.position[i], -half, half);
}

SwarmState init_swarm(const PsoParams& params, int num_antennas, double region_size,
                      const FitnessFn& fitness) {
  params.validate();
  check_domain(num_antennas, region_size);
  if (!fitness) throw std::invalid_argument("fitness function must be callable");

  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(num_antennas);
  const double half = region_size / 2.0;

  SwarmState state;
  state.particles.resize(static_cast<std::size_t>(params.swarm_size));
  for (int n = 0; n < params.swarm_size; ++n) {
    Rng rng = Rng::derive(params.rng_seed, {kStreamInit, static_cast<std::uint64_t>(n)});
    Particle& p = state.particles[static_cast<std::size_t>(n)];
    p.position.resize(dim);
    p.velocity.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) p.position[i] = rng.uniform(-half, half);
    for (Eigen::Index i = 0; i < dim; ++i) p.velocity[i] = rng.uniform(-half, half);
    p.best_position = p.position;
  }

  std::vector<double> fits(state.particles.size());
  parallel_for(params.swarm_size, params.threads, [&](int n) {
    fits[static_cast<std::size_t>(n)] = fitness(state.particles[static_cast<std::size_t>(n)].position);
  });

  state.global_best_fitness = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < params.swarm_size; ++n) {
    Particle& p = state.particles[static_cast<std::size_t>(n)];
    p.best_fitness = fits[static_cast<std::size_t>(n)];
    if (p.best_fitness > state.global_best_fitness) {
      state.global_best_fitness = p.best_fitness;
      state.global_best_position = p.best_position;
    }
  }
  record_trace(state);
  return state;
}

SwarmState swarm_optimize(const PsoParams& params, int num_antennas, double region_size,
                          const FitnessFn& fitness) {
  SwarmState state = init_swarm(params, num_antennas, region_size, fitness);
  const int total = params.max_iters;
  std::vector<double> fits(state.particles.size());

  for (int t = 0; t < total; ++t) {
    double inertia =
        total > 1 ? params.inertia_start +
                        (params.inertia_end - params.inertia_start) * t / (total - 1)
                  : params.inertia_start;

    if (params.sequential_best_update) {
      for (int n = 0; n < params.swarm_size; ++n) {
        Particle& p = state.particles[static_cast<std::size_t>(n)];
        Rng rng = Rng::derive(params.rng_seed, {kStreamVelocity, static_cast<std::uint64_t>(t),
                                                static_cast<std::uint64_t>(n)});
        update_velocity(p, state.global_best_position, inertia, params, rng);
        update_position(p, region_size);
        adopt_if_better(p, fitness(p.position), state);
      }
    } else {
      for (int n = 0; n < params.swarm_size; ++n) {
        Particle& p = state.particles[static_cast<std::size_t>(n)];
        Rng rng = Rng::derive(params.rng_seed, {kStreamVelocity, static_cast<std::uint64_t>(t),
                                                static_cast<std::uint64_t>(n)});
        update_velocity(p, state.global_best_position, inertia, params, rng);
        update_position(p, region_size);
      }
      parallel_for(params.swarm_size, params.threads, [&](int n) {
        fits[static_cast<std::size_t>(n)] =
            fitness(state.particles[static_cast<std::size_t>(n)].position);
      });
      for (int n = 0; n < params.swarm_size; ++n)
        adopt_if_better(state.particles[static_cast<std::size_t>(n)],
                        fits[static_cast<std::size_t>(n)], state);
    }

    state.iteration = t + 1;
    record_trace(state);
  }
  return state;
}

PenaltyReport violation_set(const AntennaPositioningVector& apv, double min_dist) {
  if (!(min_dist >= 0.0)) throw std::invalid_argument("min_dist must be nonnegative");
  PenaltyReport report;
  for (std::size_t m = 0; m + 1 < apv.size(); ++m) {
    for (std::size_t i = m + 1; i < apv.size(); ++i) {
      if (std::hypot(apv[m].x - apv[i].x, apv[m].y - apv[i].y) < min_dist)
        report.violating_pairs.emplace_back(static_cast<int>(m), static_cast<int>(i));
    }
  }
  return report;
}

double apply_penalty(double min_rate, int violation_count, double penalty_weight) {
  return min_rate - penalty_weight * static_cast<double>(violation_count);
}

double penalized_fitness(const AntennaPositioningVector& apv, const ScenarioInstance& scenario,
                         const PsoParams& params) {
  InnerSolution inner = bcd_solve(apv, scenario, params.rate_tol, params.bisect_tol);
  int violations = violation_set(apv, scenario.config.min_dist).count();
  return apply_penalty(inner.min_rate, violations, params.penalty_weight);
}

PsoResult pso_solve(const ScenarioInstance& scenario, const PsoParams& params) {
  scenario.config.validate();
  params.validate();
  const ScenarioConfig& cfg = scenario.config;

  // A violating placement must never outscore a feasible one, so the weight
  // has to dominate every attainable rate. |h_k entry| <= sum_l |g_kl| gives
  // ||h_k||^2 <= M (sum_l |g_kl|)^2 independent of the placement.
  double rate_bound = 0.0;
  for (const auto& user : scenario.users) {
    double amplitude = user.path_response().cwiseAbs().sum();
    double gain_bound = cfg.num_antennas * amplitude * amplitude;
    rate_bound = std::max(rate_bound, std::log2(1.0 + cfg.p_max * gain_bound / cfg.noise_power));
  }
  PsoParams effective = params;
  bool raised = false;
  if (rate_bound >= params.penalty_weight) {
    effective.penalty_weight = rate_bound + 1.0;
    raised = true;
  }

  std::atomic<int> nonconverged{0};
  auto fitness = [&](const Eigen::VectorXd& flat) {
    AntennaPositioningVector apv = apv_from_flat(flat);
    InnerSolution inner = bcd_solve(apv, scenario, params.rate_tol, params.bisect_tol);
    if (!inner.converged) nonconverged.fetch_add(1, std::memory_order_relaxed);
    int violations = violation_set(apv, cfg.min_dist).count();
    return apply_penalty(inner.min_rate, violations, effective.penalty_weight);
  };

  SwarmState state = swarm_optimize(effective, cfg.num_antennas, cfg.region_size, fitness);

  state.penalty_trace.reserve(state.best_position_trace.size());
  for (const auto& pos : state.best_position_trace)
    state.penalty_trace.push_back(violation_set(apv_from_flat(pos), cfg.min_dist).count());

  PsoResult result;
  result.apv = apv_from_flat(state.global_best_position);
  result.final_penalty = violation_set(result.apv, cfg.min_dist);
  result.inner = bcd_solve(result.apv, scenario, params.rate_tol, params.bisect_tol);
  result.state = std::move(state);
  result.penalty_weight_used = effective.penalty_weight;
  result.penalty_weight_raised = raised;
  result.nonconverged_evals = nonconverged.load();
  return result;
}

}  // namespace mamax
