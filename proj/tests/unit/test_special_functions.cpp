#include "ellipsoid_entropy/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

using namespace ellipsoid_entropy;
using std::numbers::pi;

TEST_CASE("bessel_j basics") {
  CHECK(specfun::bessel_j(0.0, 0.0) == 1.0);
  CHECK(specfun::bessel_j(2.0, 0.0) == 0.0);
  // half-integer closed form: J_{1/2}(x) = sqrt(2/(pi x)) sin x
  CHECK(specfun::bessel_j(0.5, pi / 2) == doctest::Approx(2.0 / pi).epsilon(1e-10));
  CHECK_THROWS_AS(specfun::bessel_j(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(specfun::bessel_j(1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(specfun::bessel_j(1.0, std::nan("")), std::domain_error);
}

TEST_CASE("bessel_j half-integer closed forms across the series/large-x split") {
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.1 + (20.0 - 0.1) * i / 200.0;
    const double j_half = std::sqrt(2.0 / (pi * x)) * std::sin(x);
    const double j_3half =
        std::sqrt(2.0 / (pi * x)) * (std::sin(x) / x - std::cos(x));
    CHECK(specfun::bessel_j(0.5, x) ==
          doctest::Approx(j_half).epsilon(1e-9).scale(1.0));
    CHECK(specfun::bessel_j(1.5, x) ==
          doctest::Approx(j_3half).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("olenko_rhs pinned values") {
  // direct evaluations of b sqrt(nu^{1/3} + a1 nu^{-1/3} + 3 a1^2/(10 nu))
  CHECK(specfun::olenko_rhs(5.0) == doctest::Approx(1.1692972801268633).epsilon(1e-12));
  CHECK(specfun::olenko_rhs(3.0) == doctest::Approx(1.1831376988534563).epsilon(1e-12));
  CHECK(specfun::olenko_rhs(17.0) == doctest::Approx(1.2359390070997809).epsilon(1e-12));
  // nu^{1/6} growth at large order
  CHECK(specfun::olenko_rhs(1e6) > specfun::olenko_rhs(1e3));
  const double ratio = specfun::olenko_rhs(1e6) /
                       (specfun::kOlenkoB * std::pow(1e6, 1.0 / 6.0));
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-2));
  CHECK_THROWS_AS(specfun::olenko_rhs(0.0), std::domain_error);
}

TEST_CASE("envelope plateau and monotone envelope") {
  // sup over [3,5] is attained at the left endpoint
  CHECK(specfun::envelope_plateau() ==
        doctest::Approx(1.1831376988534563).epsilon(1e-12));
  CHECK(specfun::envelope_f(3.0) == doctest::Approx(1.1831376988534563).epsilon(1e-12));
  CHECK(specfun::envelope_f(5.0) == doctest::Approx(1.1831376988534563).epsilon(1e-12));
  CHECK(specfun::envelope_f(17.0) ==
        doctest::Approx(1.2359390070997809).epsilon(1e-12));
  CHECK_THROWS_AS(specfun::envelope_f(2.9), std::domain_error);

  // dominates olenko_rhs and is non-decreasing on a sampled grid
  double prev = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double nu = 3.0 + i * 0.2;
    const double f = specfun::envelope_f(nu);
    CHECK(f >= specfun::olenko_rhs(nu) - 1e-15);
    CHECK(f >= prev - 1e-15);
    prev = f;
  }
}

TEST_CASE("envelope_ratio") {
  CHECK(specfun::envelope_ratio(4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(specfun::envelope_ratio(2) == doctest::Approx(1.0).epsilon(1e-12));
  const double r40 = specfun::envelope_ratio(40);
  CHECK(r40 == doctest::Approx(0.993263825452462).epsilon(1e-9));
  CHECK(r40 >= 0.9);
  CHECK(r40 <= 1.0);
}

TEST_CASE("log_gamma") {
  CHECK(specfun::log_gamma(1.0) == 0.0);
  CHECK(specfun::log_gamma(6.0) == doctest::Approx(std::log(120.0)).epsilon(1e-12));
  // Gamma(3.5) = 15 sqrt(pi) / 8
  CHECK(specfun::log_gamma(3.5) ==
        doctest::Approx(std::log(15.0 * std::sqrt(pi) / 8.0)).epsilon(1e-12));
  CHECK_THROWS_AS(specfun::log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(specfun::log_gamma(-2.0), std::domain_error);
}

TEST_CASE("uniform bound sampled over orders and a log grid") {
  for (double nu : {1.0, 2.0, 3.5, 5.0, 10.0, 17.0, 50.0}) {
    const double bound = specfun::olenko_rhs(nu);
    for (int i = 0; i < 1000; ++i) {
      const double x = 1e-3 * std::pow(1e7, i / 999.0);
      const double v = std::sqrt(x) * std::fabs(specfun::bessel_j(nu, x));
      REQUIRE(v <= bound + 1e-9);
    }
  }
}
