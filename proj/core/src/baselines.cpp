#include "cherlb/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "cherlb/special.hpp"

namespace cherlb {

double poly_lb_central(int dof, double variance,
                       const ReliabilityTarget& target) {
  if (dof < 1) throw std::invalid_argument("dof must be >= 1");
  if (!(variance > 0.0)) throw std::invalid_argument("variance must be > 0");
  const double k = dof;
  // log domain: the eps^(2/K) factor underflows for small eps and large K.
  const double log_val = std::log(2.0 * variance) +
                         (2.0 / k) * (std::log(target.epsilon) +
                                      std::lgamma(0.5 * k + 1.0));
  return std::exp(log_val);
}

double poly_lb_noncentral(const NoncentralChiSquareSpec& spec,
                          const ReliabilityTarget& target) {
  return poly_lb_central(spec.dof(), spec.variance(), target) *
         std::exp(spec.noncentrality() /
                  (spec.dof() * spec.variance()));
}

std::string_view to_string(ApproximationMethod m) {
  switch (m) {
    case ApproximationMethod::sankaran_z1: return "z1";
    case ApproximationMethod::sankaran_z2: return "z2";
    case ApproximationMethod::abdelaty_first: return "aty1";
    case ApproximationMethod::abdelaty_closer: return "aty2";
    case ApproximationMethod::zar: return "zar";
    case ApproximationMethod::goldstein: return "goldstein";
  }
  return "?";
}

namespace {

// All approximations act on the unit-variance variable X = beta/s2 with
// f degrees of freedom and noncentrality lam = M2/s2; the returned
// threshold is scaled back by s2. z is the standard normal quantile of
// the target.

// Cube-root Gaussianization with delta-method moments from the exact first
// three cumulants of X (mean m, variance v, third central moment t):
//   E[(X/m)^(1/3)]  ~ 1 - v/(9 m^2) + 5 t/(81 m^3)
//   Var[(X/m)^(1/3)] ~ v/(9 m^2) - 6 t/(81 m^3) - v^2/(81 m^4)
ApproxResult cube_root_three_cumulant(double f, double lam, double z) {
  const double m = f + lam;
  const double v = 2.0 * (f + 2.0 * lam);
  const double t = 8.0 * (f + 3.0 * lam);
  const double mean_y = 1.0 - v / (9.0 * m * m) + 5.0 * t / (81.0 * m * m * m);
  const double var_y =
      v / (9.0 * m * m) - 6.0 * t / (81.0 * m * m * m) - v * v / (81.0 * m * m * m * m);
  if (!(var_y > 0.0)) return {0.0, false};
  const double y = mean_y + z * std::sqrt(var_y);
  const double x = m * y * y * y;  // odd power: sign survives
  return {x, x > 0.0};
}

// Same transform with the third-cumulant correction kept only in the
// variance term.
ApproxResult cube_root_variance_corrected(double f, double lam, double z) {
  const double m = f + lam;
  const double v = 2.0 * (f + 2.0 * lam);
  const double t = 8.0 * (f + 3.0 * lam);
  const double mean_y = 1.0 - v / (9.0 * m * m);
  const double var_y = v / (9.0 * m * m) - 6.0 * t / (81.0 * m * m * m);
  if (!(var_y > 0.0)) return {0.0, false};
  const double y = mean_y + z * std::sqrt(var_y);
  const double x = m * y * y * y;
  return {x, x > 0.0};
}

// Wilson-Hilferty cube root on the two-moment central reduction
// (effective dof (f+lam)^2/(f+2 lam)):
//   (X/(f+lam))^(1/3) ~ N(1 - c, c),  c = 2 (f+2 lam)/(9 (f+lam)^2).
ApproxResult wilson_hilferty(double f, double lam, double z) {
  const double m = f + lam;
  const double c = 2.0 * (f + 2.0 * lam) / (9.0 * m * m);
  const double y = 1.0 - c + z * std::sqrt(c);
  const double x = m * y * y * y;
  return {x, x > 0.0};
}

// Power transform (X/(f+lam))^h with h chosen to kill the leading
// skewness, h = 1 - (2/3)(f+lam)(f+3 lam)/(f+2 lam)^2, and leading-order
// moments. A fractional power: a negative Gaussianized value has no
// preimage and is flagged.
ApproxResult h_power(double f, double lam, double z) {
  const double m = f + lam;
  const double h = 1.0 - (2.0 / 3.0) * m * (f + 3.0 * lam) /
                             ((f + 2.0 * lam) * (f + 2.0 * lam));
  const double p = (f + 2.0 * lam) / (m * m);
  const double mean_y = 1.0 + h * (h - 1.0) * p;
  const double sd_y = h * std::sqrt(2.0 * p);
  const double y = mean_y + z * sd_y;
  if (!(y > 0.0)) return {0.0, false};
  return {m * std::pow(y, 1.0 / h), true};
}

// Cornish-Fisher expansions for the central chi-square quantile; the
// noncentral case goes through the two-moment central reduction
// X ~ c * chi2(n1) with c = (f+2 lam)/(f+lam), n1 = (f+lam)^2/(f+2 lam).
double cornish_fisher4(double n, double z) {
  return n + std::sqrt(2.0 * n) * z + (2.0 / 3.0) * (z * z - 1.0) +
         (z * z * z - 7.0 * z) * std::sqrt(2.0 / n) / 18.0;
}

double cornish_fisher6(double n, double z) {
  const double z2 = z * z;
  return cornish_fisher4(n, z) -
         (6.0 * z2 * z2 + 14.0 * z2 - 32.0) / (405.0 * n) +
         (9.0 * z2 * z2 * z + 256.0 * z2 * z - 433.0 * z) *
             std::sqrt(2.0 / n) / (4860.0 * n);
}

ApproxResult central_cf(double f, double lam, double z, bool six_terms) {
  const double c = (f + 2.0 * lam) / (f + lam);
  const double n1 = (f + lam) * (f + lam) / (f + 2.0 * lam);
  const double q = six_terms ? cornish_fisher6(n1, z) : cornish_fisher4(n1, z);
  const double x = c * q;
  return {x, x > 0.0};
}

}  // namespace

ApproxResult approx_threshold(ApproximationMethod method,
                              const NoncentralChiSquareSpec& spec,
                              const ReliabilityTarget& target) {
  const double f = spec.dof();
  const double lam = spec.rho();
  const double z = special::inverse_normal_cdf(target.epsilon);

  ApproxResult r;
  switch (method) {
    case ApproximationMethod::sankaran_z1:
      r = cube_root_three_cumulant(f, lam, z);
      break;
    case ApproximationMethod::sankaran_z2:
      r = cube_root_variance_corrected(f, lam, z);
      break;
    case ApproximationMethod::abdelaty_first:
      r = wilson_hilferty(f, lam, z);
      break;
    case ApproximationMethod::abdelaty_closer:
      r = h_power(f, lam, z);
      break;
    case ApproximationMethod::zar:
      r = central_cf(f, lam, z, false);
      break;
    case ApproximationMethod::goldstein:
      r = central_cf(f, lam, z, true);
      break;
  }
  r.value *= spec.variance();
  return r;
}

QuadraticFit regression_fit(std::span<const std::pair<double, double>> pairs,
                            bool anchored) {
  if (pairs.size() < 3)
    throw std::invalid_argument("regression needs at least 3 pairs");
  double xmin = pairs[0].first, xmax = pairs[0].first;
  for (const auto& [x, y] : pairs) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (xmax == xmin) throw std::invalid_argument("singular design: all M2 equal");

  if (!anchored) {
    // Centered/scaled basis keeps the 3x3 normal system well conditioned.
    const double c = 0.5 * (xmin + xmax);
    const double s = 0.5 * (xmax - xmin);
    double S[3][3] = {};
    double b[3] = {};
    for (const auto& [x, y] : pairs) {
      const double u = (x - c) / s;
      const double phi[3] = {1.0, u, u * u};
      for (int i = 0; i < 3; ++i) {
        b[i] += phi[i] * y;
        for (int j = 0; j < 3; ++j) S[i][j] += phi[i] * phi[j];
      }
    }
    // Gaussian elimination with partial pivoting on the 3x3 system.
    double A[3][4] = {{S[0][0], S[0][1], S[0][2], b[0]},
                      {S[1][0], S[1][1], S[1][2], b[1]},
                      {S[2][0], S[2][1], S[2][2], b[2]}};
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r)
        if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
      if (A[piv][col] == 0.0)
        throw std::invalid_argument("singular design matrix");
      if (piv != col)
        for (int j = 0; j < 4; ++j) std::swap(A[piv][j], A[col][j]);
      for (int r = 0; r < 3; ++r) {
        if (r == col) continue;
        const double fct = A[r][col] / A[col][col];
        for (int j = col; j < 4; ++j) A[r][j] -= fct * A[col][j];
      }
    }
    const double q0 = A[0][3] / A[0][0];
    const double q1 = A[1][3] / A[1][1];
    const double q2 = A[2][3] / A[2][2];
    // y = q0 + q1 u + q2 u^2 with u = (x-c)/s.
    QuadraticFit fit;
    fit.a2 = q2 / (s * s);
    fit.a1 = q1 / s - 2.0 * q2 * c / (s * s);
    fit.a0 = q0 - q1 * c / s + q2 * c * c / (s * s);
    fit.anchored = false;
    return fit;
  }

  // Anchored: intercept pinned to the M2=0 observation.
  const std::pair<double, double>* zero = nullptr;
  for (const auto& pr : pairs)
    if (pr.first == 0.0) zero = &pr;
  if (!zero)
    throw std::invalid_argument("anchored fit requires the M2=0 pair");
  const double a0 = zero->second;

  const double s = xmax;  // scale x into [0,1]
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0;
  for (const auto& [x, y] : pairs) {
    const double u = x / s;
    const double r = y - a0;
    s11 += u * u;
    s12 += u * u * u;
    s22 += u * u * u * u;
    b1 += u * r;
    b2 += u * u * r;
  }
  const double det = s11 * s22 - s12 * s12;
  if (det == 0.0) throw std::invalid_argument("singular design matrix");
  const double c1 = (b1 * s22 - b2 * s12) / det;
  const double c2 = (b2 * s11 - b1 * s12) / det;
  QuadraticFit fit;
  fit.a0 = a0;
  fit.a1 = c1 / s;
  fit.a2 = c2 / (s * s);
  fit.anchored = true;
  return fit;
}

double regression_predict(const QuadraticFit& fit, double m2) {
  return (fit.a2 * m2 + fit.a1) * m2 + fit.a0;
}

}  // namespace cherlb
