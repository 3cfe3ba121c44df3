#include "cherlb/solver.hpp"

#include <cmath>
#include <limits>

namespace cherlb {

void SolverConfig::validate() const {
  if (!(delta_beta > 0.0)) throw std::invalid_argument("delta_beta must be > 0");
  if (!(delta_nu > 0.0)) throw std::invalid_argument("delta_nu must be > 0");
  if (!(nu_ini > 0.0)) throw std::invalid_argument("nu_ini must be > 0");
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must be > 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

namespace {

double log_objective_general(const GeneralizedChiSquareSpec& spec, double nu,
                             double beta) {
  double v = nu * beta;
  for (const auto& c : spec.components()) {
    const double t = 1.0 + 2.0 * c.variance * nu;
    v -= c.mean * c.mean * nu / t + 0.5 * std::log(t);
  }
  return v;
}

// Sign of ds/dnu: s > 0, so it is the sign of
//   beta - sum_k [ mu_k^2/(1+2 var_k nu)^2 + var_k/(1+2 var_k nu) ],
// where the sum decreases monotonically from E[beta] to 0 in nu.
double dlog_objective_dnu(const GeneralizedChiSquareSpec& spec, double nu,
                          double beta) {
  double m = 0.0;
  for (const auto& c : spec.components()) {
    const double t = 1.0 + 2.0 * c.variance * nu;
    m += c.mean * c.mean / (t * t) + c.variance / t;
  }
  return beta - m;
}

}  // namespace

double objective_general(const GeneralizedChiSquareSpec& spec, double nu,
                         double beta) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  return std::exp(log_objective_general(spec, nu, beta));
}

double log_objective_noncentral(const NoncentralChiSquareSpec& spec, double nu,
                                double beta) {
  const double t = 1.0 + 2.0 * spec.variance() * nu;
  return nu * beta - spec.noncentrality() * nu / t -
         0.5 * spec.dof() * std::log(t);
}

double objective_noncentral(const NoncentralChiSquareSpec& spec, double nu,
                            double beta) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  return std::exp(log_objective_noncentral(spec, nu, beta));
}

double optimal_nu(const NoncentralChiSquareSpec& spec, double beta) {
  const double s2 = spec.variance();
  const double m2 = spec.noncentrality();
  const double k = spec.dof();
  if (!(beta > 0.0) || beta >= spec.mean())
    throw std::domain_error("optimal_nu: beta must lie in (0, E[beta])");
  const double ks2 = k * s2;
  return (ks2 + std::sqrt(ks2 * ks2 + 4.0 * beta * m2)) / (4.0 * s2 * beta) -
         1.0 / (2.0 * s2);
}

namespace {

struct Bisection {
  double low = 0.0;
  double up = 0.0;
  int iters = 0;
  bool below_tolerance = false;
};

// Shared outer loop: bisect beta on (0, mean) against log eps using a
// callable g(beta) = log inf_nu s(nu, beta). Moves the upper endpoint when
// the objective exceeds eps (the objective increases in beta), and returns
// the lower endpoint so the result stays on the conservative side.
template <class LogG>
Bisection bisect_beta(double mean, double log_eps, const SolverConfig& cfg,
                      LogG&& log_g) {
  const double tol =
      cfg.delta_beta_absolute ? cfg.delta_beta : cfg.delta_beta * mean;
  Bisection r;
  r.low = 0.0;
  r.up = mean;
  while (r.up - r.low > tol) {
    if (++r.iters > cfg.max_iters)
      throw iteration_cap_error("beta bisection exceeded max_iters");
    const double mid = 0.5 * (r.low + r.up);
    if (log_g(mid) > log_eps)
      r.up = mid;
    else
      r.low = mid;
  }
  r.below_tolerance = !(r.low > 0.0);
  return r;
}

}  // namespace

BoundReport solve_noncentral(const NoncentralChiSquareSpec& spec,
                             const ReliabilityTarget& target,
                             const SolverConfig& cfg) {
  cfg.validate();
  const double log_eps = std::log(target.epsilon);
  const auto log_g = [&](double beta) {
    return log_objective_noncentral(spec, optimal_nu(spec, beta), beta);
  };
  const Bisection r = bisect_beta(spec.mean(), log_eps, cfg, log_g);

  BoundReport rep;
  rep.method = "cherlb-noncentral";
  rep.bound = r.low;
  rep.iterations.outer = r.iters;
  rep.below_tolerance = r.below_tolerance;
  if (r.low > 0.0) {
    rep.nu_star = optimal_nu(spec, r.low);
    rep.objective_at_bound = objective_noncentral(spec, rep.nu_star, r.low);
  } else {
    rep.nu_star = std::numeric_limits<double>::infinity();
    rep.objective_at_bound = 0.0;
  }
  return rep;
}

BoundReport solve_general(const GeneralizedChiSquareSpec& spec,
                          const ReliabilityTarget& target,
                          const SolverConfig& cfg) {
  cfg.validate();
  const double log_eps = std::log(target.epsilon);
  IterationCounts counts;

  // Inner minimizer over nu: grow the bracket by gamma until ds/dnu turns
  // nonnegative, then bisect on the derivative sign.
  const auto inner_nu_star = [&](double beta) {
    double nu_low = 0.0;
    double nu_up = cfg.nu_ini;
    int grow = 0;
    while (dlog_objective_dnu(spec, nu_up, beta) < 0.0) {
      nu_up *= cfg.gamma;
      ++counts.nu_bracket;
      if (++grow > cfg.max_iters)
        throw iteration_cap_error("nu bracket growth exceeded max_iters");
    }
    int steps = 0;
    while (nu_up - nu_low > cfg.delta_nu) {
      const double mid = 0.5 * (nu_low + nu_up);
      if (dlog_objective_dnu(spec, mid, beta) >= 0.0)
        nu_up = mid;
      else
        nu_low = mid;
      ++counts.nu_bisect;
      if (++steps > 4 * cfg.max_iters)
        throw iteration_cap_error("nu bisection exceeded max_iters");
    }
    return 0.5 * (nu_low + nu_up);
  };

  const auto log_g = [&](double beta) {
    const double nu = inner_nu_star(beta);
    return log_objective_general(spec, nu, beta);
  };
  const Bisection r = bisect_beta(spec.total_mean(), log_eps, cfg, log_g);

  BoundReport rep;
  rep.method = "cherlb-general";
  rep.bound = r.low;
  counts.outer = r.iters;
  rep.below_tolerance = r.below_tolerance;
  if (r.low > 0.0) {
    rep.nu_star = inner_nu_star(r.low);
    rep.objective_at_bound = objective_general(spec, rep.nu_star, r.low);
  } else {
    rep.nu_star = std::numeric_limits<double>::infinity();
    rep.objective_at_bound = 0.0;
  }
  rep.iterations = counts;
  return rep;
}

BoundReport solve_central(int dof, double variance,
                          const ReliabilityTarget& target,
                          const SolverConfig& cfg) {
  cfg.validate();
  const NoncentralChiSquareSpec spec(dof, 0.0, variance);
  // Central reduction of the objective at the optimal nu:
  //   log s = K/2 - beta/(2 s2) + (K/2) log(beta/(K s2)).
  const double k = dof;
  const double s2 = variance;
  const double log_eps = std::log(target.epsilon);
  const auto log_g = [&](double beta) {
    return 0.5 * k - beta / (2.0 * s2) + 0.5 * k * std::log(beta / (k * s2));
  };
  const Bisection r = bisect_beta(spec.mean(), log_eps, cfg, log_g);

  BoundReport rep;
  rep.method = "cherlb-central";
  rep.bound = r.low;
  rep.iterations.outer = r.iters;
  rep.below_tolerance = r.below_tolerance;
  if (r.low > 0.0) {
    rep.nu_star = optimal_nu(spec, r.low);
    rep.objective_at_bound = objective_noncentral(spec, rep.nu_star, r.low);
  } else {
    rep.nu_star = std::numeric_limits<double>::infinity();
    rep.objective_at_bound = 0.0;
  }
  return rep;
}

void verify_report(BoundReport& report, const NoncentralChiSquareSpec& spec) {
  report.verified_cdf = noncentral_cdf(spec, report.bound);
}

}  // namespace cherlb
