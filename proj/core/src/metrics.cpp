#include "cherlb/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace cherlb {

namespace {

double log_epsilon_from_lambda(double lambda, double rho, double k) {
  const double pk = rho + k;
  const double root = std::sqrt(k * k + 4.0 * lambda * rho * pk);
  return 0.5 * (-lambda * pk - rho + root) -
         0.5 * k * std::log((k + root) / (2.0 * lambda * pk));
}

}  // namespace

ClosenessReport closeness(const NoncentralChiSquareSpec& spec, double bound) {
  if (!(bound > 0.0) || bound >= spec.mean())
    throw std::domain_error("closeness: bound must lie in (0, E[beta])");
  ClosenessReport r;
  r.rho = spec.rho();
  r.lambda = bound / spec.mean();
  r.dof = spec.dof();
  r.epsilon = epsilon_from_lambda(r.lambda, r.rho, r.dof);
  return r;
}

double epsilon_from_lambda(double lambda, double rho, int dof) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must be in (0,1)");
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  return std::exp(log_epsilon_from_lambda(lambda, rho, dof));
}

double epsilon_sensitivity(double lambda, double rho, int dof) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must be in (0,1)");
  const double k = dof;
  const double pk = rho + k;
  const double root = std::sqrt(k * k + 4.0 * lambda * rho * pk);
  const double d_ln =
      -pk + k / (2.0 * lambda) + (2.0 * rho * pk + k * k / (2.0 * lambda)) / root;
  return d_ln / (2.0 * std::log(10.0));
}

double check_scaling(const NoncentralChiSquareSpec& spec, double eta,
                     const ReliabilityTarget& target, const SolverConfig& cfg) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  const BoundReport base = solve_noncentral(spec, target, cfg);
  const NoncentralChiSquareSpec scaled(spec.dof(), eta * spec.noncentrality(),
                                       eta * spec.variance());
  const BoundReport other = solve_noncentral(scaled, target, cfg);
  const double want = eta * base.bound;
  return std::fabs(other.bound - want) / want;
}

double diversity_equivalent_epsilon(int dof, double epsilon) {
  if (dof < 1) throw std::invalid_argument("dof must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in (0,1)");
  return std::pow(epsilon, 2.0 / static_cast<double>(dof));
}

}  // namespace cherlb
