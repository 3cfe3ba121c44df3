#pragma once

// Closeness analysis of the Chernoff bound: rho = M2/s2, the closeness
// ratio lambda = bound / E[beta], the closed-form eps(lambda, rho, K) and
// its lambda-sensitivity, the linear scaling law, and the diversity-order
// relaxation.

#include "cherlb/chi2.hpp"
#include "cherlb/solver.hpp"

namespace cherlb {

struct ClosenessReport {
  double rho = 0.0;
  double lambda = 0.0;
  // The outage target for which this bound is the exact Chernoff bound,
  // recovered in closed form from (lambda, rho, K).
  double epsilon = 0.0;
  int dof = 0;
};

ClosenessReport closeness(const NoncentralChiSquareSpec& spec, double bound);

// Closed form of the target as a function of the closeness ratio:
// exponential of the optimized Chernoff exponent expressed in (lambda,
// rho, K). Exact functional inverse of the solver.
double epsilon_from_lambda(double lambda, double rho, int dof);

// d(log10 eps)/d(lambda); positive, divergent as lambda -> 0+, strictly
// decreasing in lambda.
double epsilon_sensitivity(double lambda, double rho, int dof);

// Scaling-law residual: solving the (eta M2, eta s2) spec must reproduce
// eta times the original bound. Returns the relative error.
double check_scaling(const NoncentralChiSquareSpec& spec, double eta,
                     const ReliabilityTarget& target,
                     const SolverConfig& cfg = {});

// At fixed rho/K, raising the dof relaxes the effective outage target to
// eps^(2/K).
double diversity_equivalent_epsilon(int dof, double epsilon);

}  // namespace cherlb
