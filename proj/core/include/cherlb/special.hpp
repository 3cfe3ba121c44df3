#pragma once

// Special functions needed by the distribution oracle and the baselines.
// Everything is double precision and pure.

namespace cherlb::special {

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x).
// Series for x < a+1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// exp(a*ln(x) - x - lgamma(a+1)): the step between consecutive
// regularized gammas, P(a,x) - P(a+1,x).
double gamma_pdf_term(double a, double x);

// Inverse standard normal CDF, accurate to a few ulp after refinement.
double inverse_normal_cdf(double p);

// Zero-order Bessel J0.
double bessel_j0(double x);

// Exponentially scaled modified Bessel functions e^{-x} I0(x), e^{-x} I1(x),
// valid for x >= 0 including very large arguments.
double bessel_i0e(double x);
double bessel_i1e(double x);

}  // namespace cherlb::special
