#pragma once

// Shared oracles for the test suites. These stay independent of the
// library paths they check: the sampler here uses the standard library
// engine, not the library's counter-based streams.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cherlb/chi2.hpp"

namespace testsupport {

// Kolmogorov-Smirnov distance between a sample and the mixture CDF.
inline double ks_distance(std::vector<double> samples,
                          const cherlb::NoncentralChiSquareSpec& spec) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cherlb::noncentral_cdf(spec, samples[i]);
    ks = std::max(ks, std::max(std::fabs((i + 1) / n - f),
                               std::fabs(f - i / n)));
  }
  return ks;
}

// Brute-force draws of beta = sum (mu_k + sigma_k z_k)^2 with the stdlib
// engine; the independent check for both the series CDF and the library
// sampler.
inline std::vector<double> mt_sample(const cherlb::GeneralizedChiSquareSpec& spec,
                                     std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) {
    double beta = 0.0;
    for (const auto& c : spec.components()) {
      const double z = c.mean + std::sqrt(c.variance) * normal(gen);
      beta += z * z;
    }
    v = beta;
  }
  return out;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Empirical CDF of a sorted sample at x.
inline double ecdf(const std::vector<double>& sorted, double x) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) /
         static_cast<double>(sorted.size());
}

}  // namespace testsupport
