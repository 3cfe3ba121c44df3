#pragma once

// Comparison methods: the polynomial lower bound, the classical
// Gaussianizing quantile approximations, and quadratic regression fits.
//
// The approximations are known to fail at extreme targets; failures are
// reported (negative or out-of-domain values are flagged, never clamped)
// because exhibiting them is the point of the comparison.

#include <span>
#include <string_view>
#include <utility>

#include "cherlb/chi2.hpp"

namespace cherlb {

// Polynomial lower bound, central case: 2 s2 (eps Gamma(K/2+1))^(2/K).
// A true lower bound on the outage threshold for M2 = 0.
double poly_lb_central(int dof, double variance,
                       const ReliabilityTarget& target);

// Noncentral extension: central form times exp(M2/(K s2)). Keeps the
// compact shape but is NOT guaranteed to stay below the true threshold.
double poly_lb_noncentral(const NoncentralChiSquareSpec& spec,
                          const ReliabilityTarget& target);

enum class ApproximationMethod {
  sankaran_z1,
  sankaran_z2,
  abdelaty_first,
  abdelaty_closer,
  zar,
  goldstein,
};

std::string_view to_string(ApproximationMethod m);

struct ApproxResult {
  double value = 0.0;
  // False when the Gaussianized variable fell outside the transform's
  // domain or the value is not a usable positive threshold.
  bool valid = false;
};

ApproxResult approx_threshold(ApproximationMethod method,
                              const NoncentralChiSquareSpec& spec,
                              const ReliabilityTarget& target);

struct QuadraticFit {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  bool anchored = false;
};

// Least-squares quadratic in M2 over (M2, beta_T) pairs. The anchored
// variant pins the intercept to the M2=0 data point, which must be
// present.
QuadraticFit regression_fit(std::span<const std::pair<double, double>> pairs,
                            bool anchored);
double regression_predict(const QuadraticFit& fit, double m2);

}  // namespace cherlb
