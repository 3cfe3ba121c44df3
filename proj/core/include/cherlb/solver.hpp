#pragma once

// Chernoff lower bound on the outage threshold.
//
// For beta with target outage eps, the bound beta_perp solves
// inf_nu exp(nu*beta_perp) E[exp(-nu*beta)] = eps. The objective
// s(nu, beta) is strictly increasing in beta and has a unique inner
// minimum over nu, so the bound is found by bisection on beta with either
// a closed-form inner minimizer (equal-variance case) or an inner
// bracket-and-bisect on the sign of ds/dnu (generalized case). The
// returned lower endpoint always satisfies s <= eps, hence
// F(bound) <= eps: conservativeness is structural, not numerical.

#include <optional>
#include <stdexcept>
#include <string>

#include "cherlb/chi2.hpp"

namespace cherlb {

struct SolverConfig {
  // Outer tolerance on beta. Interpreted relative to E[beta] unless
  // delta_beta_absolute is set.
  double delta_beta = 1e-4;
  bool delta_beta_absolute = false;
  // Inner tolerance on nu (generalized path only).
  double delta_nu = 1e-9;
  // Initial nu bracket and its growth factor (must be > 1).
  double nu_ini = 1.0;
  double gamma = 2.0;
  int max_iters = 400;

  void validate() const;
};

struct IterationCounts {
  int outer = 0;
  long nu_bracket = 0;  // growth steps, summed over outer iterations
  long nu_bisect = 0;   // bisection steps, summed over outer iterations
};

struct BoundReport {
  double bound = 0.0;
  double nu_star = 0.0;
  double objective_at_bound = 0.0;  // s(nu_star, bound)
  std::optional<double> verified_cdf;
  std::string method;
  IterationCounts iterations;
  // Set when the bound collapsed below the beta tolerance (epsilon too
  // small for the configured resolution); bound is then the tiny lower
  // endpoint, still conservative.
  bool below_tolerance = false;
};

class iteration_cap_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// s(nu, beta) = exp(nu*beta) E[exp(-nu*beta_rv)], evaluated in the log
// domain. Strictly increasing in beta for fixed nu.
double objective_general(const GeneralizedChiSquareSpec& spec, double nu,
                         double beta);
double objective_noncentral(const NoncentralChiSquareSpec& spec, double nu,
                            double beta);
double log_objective_noncentral(const NoncentralChiSquareSpec& spec, double nu,
                                double beta);

// Closed-form minimizer of s(., beta) over nu for the equal-variance case:
//   nu* = (K s2 + sqrt(K^2 s4 + 4 beta M2)) / (4 s2 beta) - 1/(2 s2),
// positive exactly when beta < M2 + K s2.
double optimal_nu(const NoncentralChiSquareSpec& spec, double beta);

// Bisection solvers. All return the final lower endpoint, so the reported
// bound satisfies s(nu*, bound) <= eps and therefore F(bound) <= eps.
BoundReport solve_noncentral(const NoncentralChiSquareSpec& spec,
                             const ReliabilityTarget& target,
                             const SolverConfig& cfg = {});
BoundReport solve_general(const GeneralizedChiSquareSpec& spec,
                          const ReliabilityTarget& target,
                          const SolverConfig& cfg = {});
BoundReport solve_central(int dof, double variance,
                          const ReliabilityTarget& target,
                          const SolverConfig& cfg = {});

// Attach F(bound) from the exact CDF to the report.
void verify_report(BoundReport& report, const NoncentralChiSquareSpec& spec);

}  // namespace cherlb
