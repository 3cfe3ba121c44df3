#pragma once

// Passive-beamforming gain of a reflecting surface with perfectly aligned
// phases: beta = (sum_n |g_n h_n|)^2 over N_R reflectors, each link a
// unit-second-moment Rician magnitude. sqrt(beta) is treated as Gaussian
// by the central limit theorem, which maps beta onto a dof-1 noncentral
// chi-square spec the Chernoff solver can bound. Exact seeded sampling of
// beta provides the empirical thresholds the bound is validated against.

#include <cstdint>
#include <vector>

#include "cherlb/chi2.hpp"
#include "cherlb/solver.hpp"

namespace cherlb::ris {

struct RisConfig {
  int reflectors = 64;  // N_R
  double kappa_h = 3.0;
  double kappa_g = 3.0;
  long trials = 100000000;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  void validate() const;
};

// Laguerre function of order 1/2 at -kappa, through scaled Bessel terms:
//   L_{1/2}(-k) = e^{-k/2} [ (1+k) I0(k/2) + k I1(k/2) ].
// Under unit second moment, E|h| = (1/2) sqrt(pi/(1+kappa)) L_{1/2}(-kappa).
double laguerre_half(double kappa);

struct ProductMoments {
  double mean = 0.0;      // E|g h|
  double variance = 0.0;  // Var|g h| = 1 - mean^2 (unit product power)
};

ProductMoments product_moments(double kappa_h, double kappa_g);

// CLT mapping: K=1, M2 = (N_R E|gh|)^2, variance = N_R Var|gh|; the
// spec's rho grows linearly in N_R.
NoncentralChiSquareSpec clt_spec(const RisConfig& cfg);

// Exact draws of beta; draw i depends only on (seed, i).
std::vector<double> sample_gain(const RisConfig& cfg, std::size_t n,
                                std::uint64_t seed);
double sample_gain_one(const RisConfig& cfg, std::uint64_t seed,
                       std::uint64_t index);

struct RisExperimentResult {
  double bound = 0.0;                // Chernoff bound on the CLT spec
  double empirical_threshold = 0.0;  // exact-sample quantile at eps
  double ratio = 0.0;                // bound / empirical_threshold
  double achieved_outage = 0.0;      // exact-sample mass below the bound
  double normalized_gain = 0.0;      // bound / N_R^2
  long trials = 0;
};

// Streams cfg.trials exact samples (never materialized in memory) against
// the CLT-spec bound.
RisExperimentResult ris_experiment(const RisConfig& cfg,
                                   const ReliabilityTarget& target,
                                   const SolverConfig& solver_cfg = {});

}  // namespace cherlb::ris
