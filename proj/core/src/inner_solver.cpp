#include "mamax/inner_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace mamax {

namespace {

void check_power_args(const Eigen::Index num_users, const PowerVector& power, double noise_power) {
  if (power.size() != num_users) throw std::invalid_argument("power vector length mismatch");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be positive");
  for (Eigen::Index k = 0; k < power.size(); ++k)
    if (!(power[k] >= 0.0)) throw std::invalid_argument("powers must be nonnegative");
}

}  // namespace

double sinr(const Eigen::VectorXcd& combiner, const ChannelMatrix& channels,
            const PowerVector& power, int user_index, double noise_power) {
  const Eigen::MatrixXcd& h = channels.entries;
  check_power_args(h.cols(), power, noise_power);
  if (combiner.size() != h.rows()) throw std::invalid_argument("combiner length mismatch");
  if (user_index < 0 || user_index >= h.cols()) throw std::invalid_argument("user index out of range");
  const double w_norm2 = combiner.squaredNorm();
  if (w_norm2 == 0.0) throw std::invalid_argument("degenerate combiner");
  double signal = 0.0, interference = 0.0;
  for (Eigen::Index i = 0; i < h.cols(); ++i) {
    double gain = std::norm(combiner.dot(h.col(i)));  // |w^* h_i|^2
    if (i == user_index)
      signal = gain * power[i];
    else
      interference += gain * power[i];
  }
  return signal / (interference + w_norm2 * noise_power);
}

double achievable_rate(double sinr_value) {
  if (!(sinr_value >= 0.0)) throw std::invalid_argument("SINR must be nonnegative");
  return std::log2(1.0 + sinr_value);
}

CombiningMatrix mmse_combiner(const ChannelMatrix& channels, const PowerVector& power,
                              double noise_power) {
  const Eigen::MatrixXcd& h = channels.entries;
  check_power_args(h.cols(), power, noise_power);
  const Eigen::Index m = h.rows();
  const double h_norm = h.norm();
  if (h_norm == 0.0) return CombiningMatrix::Zero(m, h.cols());

  Eigen::MatrixXcd gram = noise_power * Eigen::MatrixXcd::Identity(m, m);
  gram.noalias() += h * power.asDiagonal() * h.adjoint();
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("combiner solve failed: covariance not positive definite");

  CombiningMatrix w = llt.solve(h);
  double residual = (gram * w - h).norm();
  if (residual > 1e-13 * h_norm) {
    w += llt.solve(h - gram * w);  // one refinement step recovers the last digits
    residual = (gram * w - h).norm();
  }
  if (!w.allFinite() || residual > 1e-8 * h_norm)
    throw std::runtime_error("combiner solve failed: relative residual " +
                             std::to_string(residual / h_norm));
  return w;
}

SinrCoefficients sinr_coefficients(const CombiningMatrix& combining, const ChannelMatrix& channels,
                                   double noise_power) {
  const Eigen::MatrixXcd& h = channels.entries;
  if (combining.rows() != h.rows() || combining.cols() != h.cols())
    throw std::invalid_argument("combiner shape mismatch");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be positive");
  SinrCoefficients coeffs;
  coeffs.cross_gains = (combining.adjoint() * h).cwiseAbs2();
  coeffs.noise_terms = combining.colwise().squaredNorm().transpose() * noise_power;
  return coeffs;
}

Eigen::VectorXd sinrs_from_coefficients(const SinrCoefficients& coeffs, const PowerVector& power) {
  const Eigen::Index num_users = coeffs.cross_gains.rows();
  if (power.size() != num_users) throw std::invalid_argument("power vector length mismatch");
  Eigen::VectorXd out(num_users);
  for (Eigen::Index k = 0; k < num_users; ++k) {
    double signal = coeffs.cross_gains(k, k) * power[k];
    double denom = coeffs.noise_terms[k];
    for (Eigen::Index i = 0; i < num_users; ++i)
      if (i != k) denom += coeffs.cross_gains(k, i) * power[i];
    out[k] = denom > 0.0 ? signal / denom : 0.0;
  }
  return out;
}

std::optional<PowerVector> power_for_target_sinr(const SinrCoefficients& coeffs, double target) {
  if (!(target > 0.0)) throw std::invalid_argument("target SINR must be positive");
  const Eigen::Index num_users = coeffs.cross_gains.rows();
  if (coeffs.cross_gains.cols() != num_users || coeffs.noise_terms.size() != num_users)
    throw std::invalid_argument("coefficient shape mismatch");

  Eigen::MatrixXd system = -coeffs.cross_gains;
  system.diagonal() = coeffs.cross_gains.diagonal() / target;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return std::nullopt;
  PowerVector p = lu.solve(coeffs.noise_terms);
  if (!p.allFinite() || (p.array() < 0.0).any()) return std::nullopt;
  return p;
}

BisectionResult bisection_max_min_sinr(const SinrCoefficients& coeffs,
                                       const ChannelMatrix& channels, double p_max,
                                       double noise_power, double tol, double eta_lower) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
  if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be positive");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be positive");
  const Eigen::Index num_users = coeffs.cross_gains.rows();

  BisectionResult result;
  result.power = PowerVector::Zero(num_users);

  double h_min = channels.entries.colwise().squaredNorm().minCoeff();
  double hi = p_max * h_min / noise_power;  // no user can exceed this target
  if (!(hi > 0.0)) return result;

  auto feasible = [&](double target) -> std::optional<PowerVector> {
    auto p = power_for_target_sinr(coeffs, target);
    if (p && (p->array() <= p_max).all()) return p;
    return std::nullopt;
  };

  double lo = 0.0;
  if (eta_lower > 0.0) {
    double warm = std::min(eta_lower, hi);
    if (auto p = feasible(warm)) {
      lo = warm;
      result.power = *p;
    }
  }
  hi = std::max(hi, lo);

  while (hi - lo >= tol) {
    ++result.iterations;
    double mid = 0.5 * (lo + hi);
    if (auto p = feasible(mid)) {
      lo = mid;
      result.power = *p;
    } else {
      hi = mid;
    }
  }
  result.eta = lo;
  return result;
}

InnerSolution bcd_solve(const ChannelMatrix& channels, double p_max, double noise_power,
                        double rate_tol, double bisect_tol, int max_iters) {
  if (!(rate_tol > 0.0)) throw std::invalid_argument("rate_tol must be positive");
  if (!(bisect_tol > 0.0)) throw std::invalid_argument("bisect_tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  const Eigen::MatrixXcd& h = channels.entries;
  const Eigen::Index num_users = h.cols();

  InnerSolution sol;
  if (h.norm() == 0.0) {
    sol.combining = CombiningMatrix::Zero(h.rows(), num_users);
    sol.power = PowerVector::Zero(num_users);
    sol.converged = true;
    sol.objective_trace = {0.0};
    return sol;
  }

  PowerVector power = PowerVector::Constant(num_users, p_max);
  CombiningMatrix combining = mmse_combiner(channels, power, noise_power);
  SinrCoefficients coeffs = sinr_coefficients(combining, channels, noise_power);
  Eigen::VectorXd gammas = sinrs_from_coefficients(coeffs, power);
  double objective = achievable_rate(gammas.minCoeff());
  sol.objective_trace.push_back(objective);

  for (int j = 1; j <= max_iters; ++j) {
    sol.iterations = j;
    BisectionResult bis =
        bisection_max_min_sinr(coeffs, channels, p_max, noise_power, bisect_tol, gammas.minCoeff());
    if (bis.eta > 0.0) {
      Eigen::VectorXd balanced = sinrs_from_coefficients(coeffs, bis.power);
      double spread =
          (balanced.maxCoeff() - balanced.minCoeff()) / (1.0 + balanced.minCoeff());
      sol.max_equal_sinr_spread = std::max(sol.max_equal_sinr_spread, spread);
    }

    CombiningMatrix next_combining = mmse_combiner(channels, bis.power, noise_power);
    SinrCoefficients next_coeffs = sinr_coefficients(next_combining, channels, noise_power);
    Eigen::VectorXd next_gammas = sinrs_from_coefficients(next_coeffs, bis.power);
    double next_objective = achievable_rate(next_gammas.minCoeff());

    if (next_objective < objective) {
      // Rounding artifact: the exact update never decreases the objective, so
      // keep the incumbent and stop.
      sol.converged = true;
      break;
    }
    double gain = next_objective - objective;
    power = bis.power;
    combining = std::move(next_combining);
    coeffs = std::move(next_coeffs);
    gammas = std::move(next_gammas);
    objective = next_objective;
    sol.objective_trace.push_back(objective);
    if (gain < rate_tol) {
      sol.converged = true;
      break;
    }
  }

  sol.combining = std::move(combining);
  sol.power = std::move(power);
  sol.min_rate = objective;
  return sol;
}

InnerSolution bcd_solve(const AntennaPositioningVector& apv, const ScenarioInstance& scenario,
                        double rate_tol, double bisect_tol, int max_iters) {
  ChannelMatrix channels = channel_matrix(apv, scenario.users, scenario.config.wavelength);
  return bcd_solve(channels, scenario.config.p_max, scenario.config.noise_power, rate_tol,
                   bisect_tol, max_iters);
}

}  // namespace mamax
