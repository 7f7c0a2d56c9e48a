#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mamax/channel.hpp"
#include "mamax/scenario.hpp"

namespace mamax {

using PowerVector = Eigen::VectorXd;       // per-user uplink power, W
using CombiningMatrix = Eigen::MatrixXcd;  // M x K; column k combines user k

// Uplink SINR of user `user_index` under combiner w and transmit powers p.
// Throws std::invalid_argument on a zero combiner ("degenerate combiner").
double sinr(const Eigen::VectorXcd& combiner, const ChannelMatrix& channels,
            const PowerVector& power, int user_index, double noise_power);

// Spectral efficiency of one user, bps/Hz.
double achievable_rate(double sinr_value);

// MMSE receive combiner: solves (H diag(p) H^* + noise I) W = H column by
// column via Cholesky with one step of iterative refinement. Throws
// std::runtime_error if the solve leaves a relative residual above 1e-8 or
// non-finite entries. A zero channel matrix yields a zero combiner.
CombiningMatrix mmse_combiner(const ChannelMatrix& channels, const PowerVector& power,
                              double noise_power);

// Fixed-combiner SINR decomposition: cross_gains(k, i) = |w_k^* h_i|^2 and
// noise_terms(k) = ||w_k||^2 * noise_power, so that
// sinr_k(p) = cross_gains(k,k) p_k / (sum_{i!=k} cross_gains(k,i) p_i + noise_terms(k)).
struct SinrCoefficients {
  Eigen::MatrixXd cross_gains;
  Eigen::VectorXd noise_terms;
};

SinrCoefficients sinr_coefficients(const CombiningMatrix& combining, const ChannelMatrix& channels,
                                   double noise_power);

// All K SINRs under the decomposition above. A user whose combiner row is
// entirely zero gets SINR 0 rather than 0/0.
Eigen::VectorXd sinrs_from_coefficients(const SinrCoefficients& coeffs, const PowerVector& power);

// Power vector making every user's SINR exactly `target`, if one exists:
// solves the K x K linear system with row k
//   cross_gains(k,k)/target * p_k - sum_{i!=k} cross_gains(k,i) p_i = noise_terms(k).
// Returns nullopt when the system is numerically singular (relative pivot
// below 1e-12) or the solution has negative or non-finite components.
std::optional<PowerVector> power_for_target_sinr(const SinrCoefficients& coeffs, double target);

struct BisectionResult {
  double eta = 0.0;      // largest SINR target certified feasible
  PowerVector power;     // achieving powers; zero when eta == 0
  int iterations = 0;
};

// Max-min common SINR under a fixed combiner by bisection on the target over
// (0, p_max * min_k ||h_k||^2 / noise_power]. A target is feasible when
// power_for_target_sinr succeeds with all components in [0, p_max]. Stops
// when the bracket is narrower than tol. eta_lower, when positive and
// feasible, seeds the lower end of the bracket (used for warm starts).
BisectionResult bisection_max_min_sinr(const SinrCoefficients& coeffs,
                                       const ChannelMatrix& channels, double p_max,
                                       double noise_power, double tol, double eta_lower = 0.0);

struct InnerSolution {
  CombiningMatrix combining;
  PowerVector power;
  double min_rate = 0.0;  // min_k log2(1 + sinr_k), bps/Hz
  int iterations = 0;
  bool converged = false;
  // Objective after initialization and after each accepted iteration.
  std::vector<double> objective_trace;
  // Largest relative equal-SINR spread (max-min)/(1+min) seen at any
  // bisection return during the solve.
  double max_equal_sinr_spread = 0.0;
};

// Alternating optimization of powers and combiners for a fixed channel:
// start from full power and the matching MMSE combiner, then repeat
// (equal-SINR power update by bisection, MMSE combiner refresh) until the
// objective gain drops below rate_tol or max_iters is hit. The bisection
// lower bracket is warm-started at the incumbent min-SINR, and an iterate
// that fails to improve the objective is discarded, so the reported
// objective trace is non-decreasing.
InnerSolution bcd_solve(const ChannelMatrix& channels, double p_max, double noise_power,
                        double rate_tol, double bisect_tol, int max_iters = 50);

// Convenience overload: builds the channel from an APV and a scenario draw.
InnerSolution bcd_solve(const AntennaPositioningVector& apv, const ScenarioInstance& scenario,
                        double rate_tol, double bisect_tol, int max_iters = 50);

}  // namespace mamax
