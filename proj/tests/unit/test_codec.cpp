#include "ellipsoid_entropy/codec.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "support/oracle.hpp"

using namespace ellipsoid_entropy;

namespace {
codec::PrecisionProfile unit_profile(int k) {
  return codec::PrecisionProfile(std::vector<double>(k, 1.0), 1.0);
}
}  // namespace

TEST_CASE("forward_difference of rooted signals") {
  CHECK(codec::forward_difference(std::vector<double>{0, 0, 0}) ==
        std::vector<double>{0, 0});
  CHECK(codec::forward_difference(std::vector<double>{0, 1, 3}) ==
        std::vector<double>{1, 2});
  CHECK(codec::forward_difference(std::vector<double>{0, 2, 1, 1}) ==
        std::vector<double>{2, -1, 0});
  CHECK_THROWS_AS(codec::forward_difference(std::vector<double>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(codec::forward_difference(std::vector<double>{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("energy") {
  CHECK(codec::energy(std::vector<double>{0, 0}) == 0.0);
  CHECK(codec::energy(std::vector<double>{3, 4}) == 25.0);
  CHECK(codec::energy(std::vector<double>{1, 1, 1, 1}) == 4.0);
}

TEST_CASE("quantize rounds toward zero in units of eps") {
  const auto u1 = codec::quantize(std::vector<double>{0, 0}, unit_profile(2));
  CHECK(u1.u == std::vector<std::int64_t>{0, 0});

  const auto u2 = codec::quantize(std::vector<double>{1.5, -2.3}, unit_profile(2));
  CHECK(u2.u == std::vector<std::int64_t>{1, -2});

  codec::PrecisionProfile p(std::vector<double>{0.5, 0.25});
  const auto u3 = codec::quantize(std::vector<double>{0.7, -0.7}, p);
  CHECK(u3.u == std::vector<std::int64_t>{1, -2});

  CHECK_THROWS_AS(codec::quantize(std::vector<double>{1.0}, unit_profile(2)),
                  std::invalid_argument);
}

TEST_CASE("quantize snaps quotients within 4 ulp of an integer") {
  // 0.3/0.1 lands a hair below 3 in binary; the snap keeps the code at 3.
  codec::PrecisionProfile p(std::vector<double>{0.1});
  CHECK(codec::quantize(std::vector<double>{0.3}, p).u[0] == 3);
  CHECK(codec::quantize(std::vector<double>{-0.3}, p).u[0] == -3);
}

TEST_CASE("quantize treats -0.0 like the nonnegative branch") {
  const auto u = codec::quantize(std::vector<double>{-0.0}, unit_profile(1));
  CHECK(u.u[0] == 0);
  CHECK(codec::recovery_box(u).contains(std::vector<double>{-0.0}));
}

TEST_CASE("recovery boxes per the sign-split definition") {
  {
    const codec::CodeVector c{{0, 0}, unit_profile(2)};
    const auto box = codec::recovery_box(c);
    CHECK(box.lo == std::vector<double>{0, 0});
    CHECK(box.hi == std::vector<double>{1, 1});
  }
  {
    const codec::CodeVector c{{1, -2}, unit_profile(2)};
    const auto box = codec::recovery_box(c);
    CHECK(box.lo == std::vector<double>{1, -3});
    CHECK(box.hi == std::vector<double>{2, -2});
  }
  {
    const codec::CodeVector c{{-1}, codec::PrecisionProfile({0.5})};
    const auto box = codec::recovery_box(c);
    CHECK(box.lo[0] == doctest::Approx(-1.0));
    CHECK(box.hi[0] == doctest::Approx(-0.5));
  }
}

TEST_CASE("box sides have length eps_i") {
  codec::PrecisionProfile p(std::vector<double>{0.1, 2.5, 1.0});
  const codec::CodeVector c{{7, -3, 0}, p};
  const auto box = codec::recovery_box(c);
  for (int i = 0; i < 3; ++i)
    CHECK(box.hi[i] - box.lo[i] == doctest::Approx(p.eps()[i]).epsilon(1e-12));
}

TEST_CASE("exact negative multiples round-trip") {
  codec::PrecisionProfile p(std::vector<double>{0.5});
  const std::vector<double> f{-1.0};  // exactly -2 * eps
  const auto code = codec::quantize(f, p);
  CHECK(code.u[0] == -2);
  CHECK(codec::recovery_box(code).contains(f));
}

TEST_CASE("profile invariants") {
  codec::PrecisionProfile p(std::vector<double>{0.5, 1.0, 2.0});
  double total = 0.0, lg = 0.0;
  for (double e : p.eps()) {
    total += e;
    lg += std::log(e);
  }
  CHECK(p.total() == doctest::Approx(total).epsilon(1e-12));
  CHECK(p.geom() == doctest::Approx(std::exp(lg / 3)).epsilon(1e-12));
  CHECK(p.min_balance_constant() == doctest::Approx(2.0 / (3.5 / 3)).epsilon(1e-12));

  CHECK_THROWS_AS(codec::PrecisionProfile(std::vector<double>{1.0, -1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(codec::PrecisionProfile(std::vector<double>{}),
                  std::invalid_argument);
  // declared C too tight for the data
  CHECK_THROWS_AS(codec::PrecisionProfile(std::vector<double>{0.1, 10.0}, 1.5),
                  std::invalid_argument);
}

TEST_CASE("round trip, contraction, feasibility on random signals") {
  test_oracle::Rng rng(20240811);
  const double R = 2.0;
  for (int trial = 0; trial < 10'000; ++trial) {
    const int k = 1 + static_cast<int>(rng.next() % 5);
    std::vector<double> eps(k);
    for (double& e : eps) e = rng.uniform(0.05, 3.0);
    codec::PrecisionProfile p(eps);
    std::vector<double> f(k);
    for (int i = 0; i < k; ++i) f[i] = rng.uniform(-8.0 * eps[i], 8.0 * eps[i]);

    const auto code = codec::quantize(f, p);
    // containment
    REQUIRE(codec::recovery_box(code).contains(f));
    // contraction coordinate-wise, hence in energy
    double qe = 0.0;
    for (int i = 0; i < k; ++i) {
      const double t = static_cast<double>(code.u[i]) * eps[i];
      REQUIRE(std::fabs(t) <= std::fabs(f[i]) * (1.0 + 1e-12));
      qe += t * t;
    }
    REQUIRE(qe <= codec::energy(f) * (1.0 + 1e-12));
    // feasibility after projecting onto a random admissible energy level
    const double e = codec::energy(f);
    if (e > 0.0) {
      const double scale = R * std::sqrt(rng.uniform01() / e);
      for (double& v : f) v *= scale;
      const auto cg = codec::quantize(f, p);
      double s = 0.0;
      for (int i = 0; i < k; ++i) {
        const double t = static_cast<double>(cg.u[i]) * eps[i];
        s += t * t;
      }
      REQUIRE(test_oracle::inside(s, R * R));
    }
  }
}

TEST_CASE("signals with equal codes share one box") {
  codec::PrecisionProfile p(std::vector<double>{0.3, 1.7});
  const std::vector<double> f1{0.31, -1.8};
  const std::vector<double> f2{0.59, -0.1};
  const auto c1 = codec::quantize(f1, p);
  const auto c2 = codec::quantize(f2, p);
  REQUIRE(c1.u == c2.u);
  const auto b1 = codec::recovery_box(c1);
  const auto b2 = codec::recovery_box(c2);
  CHECK(b1.lo == b2.lo);
  CHECK(b1.hi == b2.hi);
}
