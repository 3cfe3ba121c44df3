#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include <doctest.h>

#include "cherlb/special.hpp"

using namespace cherlb;

// Reference values computed independently with mpmath (25 digits) and
// scipy 1.15.

TEST_CASE("regularized incomplete gamma") {
  // central chi-square special cases: P(1, 1) = 1 - e^-1
  CHECK(special::gamma_p(1.0, 1.0) ==
        doctest::Approx(0.6321205588285577).epsilon(1e-14));
  CHECK(special::gamma_p(12.0, 1.5) ==
        doctest::Approx(6.824218029236008e-8).epsilon(1e-12));
  CHECK(special::gamma_q(2.0, 30.0) ==
        doctest::Approx(2.900863120340454e-12).epsilon(1e-12));
  // deep left tail keeps relative precision
  CHECK(special::gamma_p(0.5, 1.84e-19) ==
        doctest::Approx(4.840207394639923e-10).epsilon(1e-12));

  SUBCASE("complement identity") {
    for (double a : {0.5, 2.0, 7.5, 40.0})
      for (double x : {0.1, 1.0, 5.0, 60.0})
        CHECK(special::gamma_p(a, x) + special::gamma_q(a, x) ==
              doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("pdf term matches the recursion it is used in") {
    const double a = 3.5, x = 2.25;
    CHECK(special::gamma_p(a, x) - special::gamma_p(a + 1.0, x) ==
          doctest::Approx(special::gamma_pdf_term(a, x)).epsilon(1e-12));
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(special::gamma_p(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(special::gamma_p(1.0, -1.0), std::invalid_argument);
  }
}

TEST_CASE("inverse normal cdf") {
  CHECK(special::inverse_normal_cdf(1e-6) ==
        doctest::Approx(-4.753424308822899).epsilon(1e-12));
  CHECK(special::inverse_normal_cdf(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(special::inverse_normal_cdf(1e-12) ==
        doctest::Approx(-7.034483825301131).epsilon(1e-12));
  CHECK(special::inverse_normal_cdf(0.5) == doctest::Approx(0.0));
  SUBCASE("round trip through the normal cdf") {
    for (double p : {1e-9, 1e-4, 0.1, 0.5, 0.9, 1.0 - 1e-7}) {
      const double z = special::inverse_normal_cdf(p);
      CHECK(0.5 * std::erfc(-z / std::sqrt(2.0)) ==
            doctest::Approx(p).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(special::inverse_normal_cdf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(special::inverse_normal_cdf(1.0), std::invalid_argument);
}

TEST_CASE("bessel j0") {
  CHECK(special::bessel_j0(0.0) == doctest::Approx(1.0));
  CHECK(special::bessel_j0(0.7335457576830886) ==
        doctest::Approx(0.8699346652590143).epsilon(1e-13));
  CHECK(std::fabs(special::bessel_j0(2.404825557695773)) < 1e-12);
}

TEST_CASE("scaled modified bessel") {
  CHECK(special::bessel_i0e(1.5) * std::exp(1.5) ==
        doctest::Approx(1.6467231897728908).epsilon(1e-13));
  CHECK(special::bessel_i1e(1.5) * std::exp(1.5) ==
        doctest::Approx(0.9816664285779076).epsilon(1e-13));
  CHECK(special::bessel_i0e(2.5) * std::exp(2.5) ==
        doctest::Approx(3.289839144050123).epsilon(1e-13));
  CHECK(special::bessel_i1e(2.5) * std::exp(2.5) ==
        doctest::Approx(2.5167162452886984).epsilon(1e-13));
  // across the series/asymptotic crossover
  CHECK(special::bessel_i0e(50.0) ==
        doctest::Approx(0.05656162664745419).epsilon(1e-13));
  CHECK(special::bessel_i1e(50.0) ==
        doctest::Approx(0.05599312389289540).epsilon(1e-13));
  // no overflow at arguments where the unscaled function has ~e^5000
  CHECK(special::bessel_i0e(5000.0) ==
        doctest::Approx(0.005642036898744589).epsilon(1e-13));
  CHECK(special::bessel_i1e(5000.0) ==
        doctest::Approx(0.005641472666838886).epsilon(1e-13));
  CHECK(special::bessel_i0e(0.0) == doctest::Approx(1.0));
  CHECK(special::bessel_i1e(0.0) == doctest::Approx(0.0));
}
