#pragma once

// Distribution model: sums of squared independent real Gaussians.
//
// NoncentralChiSquareSpec is the equal-variance case (dof K, noncentrality
// M^2 = sum of squared means, common per-component variance sigma^2); the
// generalized spec allows per-component means and variances. This module is
// the ground-truth side of the project: exact CDF via a Poisson mixture of
// central chi-square CDFs, seeded samplers, and numeric/empirical quantiles
// that every bound is validated against.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cherlb {

struct GaussianComponent {
  double mean = 0.0;
  double variance = 1.0;
};

class GeneralizedChiSquareSpec {
 public:
  explicit GeneralizedChiSquareSpec(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const { return comps_; }
  int dof() const { return static_cast<int>(comps_.size()); }

  // E[beta] = sum(mu_k^2 + var_k); always positive.
  double total_mean() const;

  bool equal_variances() const;

 private:
  std::vector<GaussianComponent> comps_;
};

class NoncentralChiSquareSpec {
 public:
  NoncentralChiSquareSpec(int dof, double noncentrality, double variance);

  int dof() const { return dof_; }
  double noncentrality() const { return m2_; }
  double variance() const { return var_; }

  double mean() const { return m2_ + dof_ * var_; }
  double rho() const { return m2_ / var_; }

  // One component carrying the whole mean, the rest zero-mean; the CDF of
  // beta depends on the means only through M^2, so both representations
  // describe the same distribution.
  GeneralizedChiSquareSpec to_generalized() const;

 private:
  int dof_;
  double m2_;
  double var_;
};

struct ReliabilityTarget {
  double epsilon;
  double epsilon_log10;

  static ReliabilityTarget from_epsilon(double epsilon);
};

// E[exp(-nu*beta)], the Laplace transform of beta; computed in the log
// domain. Strictly decreasing in nu, equal to 1 at nu=0.
double mgf_reciprocal(const GeneralizedChiSquareSpec& spec, double nu);

// F_beta(x) as a Poisson(rho/2)-weighted mixture of central chi-square
// CDFs, truncated two-sided around the Poisson mode; relative truncation
// error is far below 1e-14 of the returned value.
double noncentral_cdf(const NoncentralChiSquareSpec& spec, double x);

// Equal-variance generalized specs reduce to the noncentral form; others
// are rejected (no quadratic-form CDF here by design).
double noncentral_cdf(const GeneralizedChiSquareSpec& spec, double x);

// Survival function 1 - F, computed by its own mixture so the deep right
// tail keeps relative accuracy.
double noncentral_sf(const NoncentralChiSquareSpec& spec, double x);

// Generalized Marcum Q of half-integer order: Q_m(a,b) with 2m a positive
// integer. Identity: Q_{K/2}(M/sigma, sqrt(x)/sigma) = 1 - F_beta(x).
double marcum_q(double half_order, double a, double b);

// n i.i.d. draws of beta. Draw i depends only on (seed, i), so any worker
// partitioning reproduces the same sequence.
std::vector<double> sample(const GeneralizedChiSquareSpec& spec, std::size_t n,
                           std::uint64_t seed);
double sample_one(const GeneralizedChiSquareSpec& spec, std::uint64_t seed,
                  std::uint64_t index);

// Ground-truth outage threshold beta_T with F(beta_T) = epsilon, solved by
// bisection with the upper bracket grown geometrically from the mean.
double numeric_quantile(const NoncentralChiSquareSpec& spec,
                        const ReliabilityTarget& target);

// Lower order statistic at rank ceil(n*eps); requires n*eps >= 100.
double empirical_quantile(std::span<const double> samples, double epsilon);

// Streaming k-smallest selection so 1e8-sample experiments never hold the
// full sample set in memory. Deterministic: the k smallest of a stream are
// a set property, independent of chunking.
class TailQuantileAccumulator {
 public:
  explicit TailQuantileAccumulator(std::size_t rank);

  void push(double value);
  void merge(const TailQuantileAccumulator& other);

  std::size_t rank() const { return rank_; }
  std::size_t seen() const { return seen_; }
  // The rank-th smallest value seen so far.
  double quantile() const;
  // Count of values strictly below x (only valid for x at or below the
  // current heap threshold once seen() >= rank()).
  std::size_t count_below(double x) const;

 private:
  std::size_t rank_;
  std::size_t seen_ = 0;
  std::vector<double> heap_;  // max-heap of the k smallest
};

class insufficient_samples_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cherlb
