#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "spectail/errors.hpp"
#include "spectail/rate_theory.hpp"

using namespace spectail;

TEST_SUITE("rate_theory") {
  TEST_CASE("phi examples") {
    CHECK(rate::phi(0.5, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rate::phi(3, 3) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(rate::phi(23, 4) == doctest::Approx(18.0).epsilon(1e-15));
    CHECK_THROWS_AS(rate::phi(1.0, 1), DomainError);
    CHECK_THROWS_AS(rate::phi(0.0, 2), DomainError);
    CHECK_THROWS_AS(rate::phi(-1.0, 3), DomainError);
  }

  TEST_CASE("psi and minimizers") {
    const auto p1 = rate::psi(1.0);
    CHECK(p1.psi == doctest::Approx(1.0));
    CHECK(p1.minimizers == std::vector<int>{2});
    CHECK(p1.h == 2);
    const auto p3 = rate::psi(3.0);
    CHECK(p3.psi == doctest::Approx(3.0));
    CHECK(p3.minimizers == std::vector<int>{2, 3});
    CHECK(p3.x_star > 2.26);
    CHECK(p3.x_star < 2.76);
    CHECK(p3.x_star == doctest::Approx(2.45).epsilon(0.01));
    const auto p23 = rate::psi(23.0);
    CHECK(p23.psi == doctest::Approx(18.0));
    CHECK(p23.minimizers == std::vector<int>{3, 4});
    CHECK_THROWS_AS(rate::psi(0.0), DomainError);
  }

  TEST_CASE("psi invariants over a grid") {
    for (double delta = 0.05; delta < 400.0; delta *= 1.07) {
      const auto p = rate::psi(delta);
      double best = 1e300;
      for (int k = 2; k < 60; ++k) best = std::min(best, rate::phi(delta, k));
      CHECK(p.psi == doctest::Approx(best).epsilon(1e-13));
      REQUIRE((p.minimizers.size() == 1 || p.minimizers.size() == 2));
      if (p.minimizers.size() == 2) CHECK(p.minimizers[1] == p.minimizers[0] + 1);
      const int fl = static_cast<int>(std::floor(p.x_star)), ce = static_cast<int>(std::ceil(p.x_star));
      const bool near = std::count(p.minimizers.begin(), p.minimizers.end(), fl) ||
                        std::count(p.minimizers.begin(), p.minimizers.end(), ce);
      CHECK(near);
      const double c = std::cbrt((1.0 + delta) / 2.0);
      CHECK(p.x_star > c + 1.0);
      CHECK(p.x_star < c + 1.5);
      CHECK(std::abs(rate::phi_prime(delta, p.x_star)) < 1e-9);
    }
  }

  TEST_CASE("transition ladder matches closed form and root-find") {
    const auto ladder = rate::transition_points(6);
    REQUIRE(ladder.points.size() == 6);
    CHECK(ladder.points[0] == 0.0);
    CHECK(ladder.points[1] == 3.0);
    CHECK(ladder.points[2] == 23.0);
    CHECK(ladder.points[3] == 71.0);
    for (int k = 2; k <= 6; ++k) {
      CHECK(std::abs(ladder.points[k - 1] - oracle::transition_root(k)) < 1e-9);
      if (k >= 2) CHECK(ladder.points[k - 1] > ladder.points[k - 2]);
      // Open intervals give one minimizer, endpoints two.
      const double mid = 0.5 * (ladder.points[k - 2] + ladder.points[k - 1]);
      if (mid > 0.0) CHECK(rate::psi(mid).minimizers == std::vector<int>{k});
      CHECK(rate::psi(ladder.points[k - 1]).minimizers == std::vector<int>{k, k + 1});
    }
    CHECK_THROWS_AS(rate::transition_points(1), DomainError);
  }

  TEST_CASE("asymptotic curve") {
    CHECK(rate::psi_asymptotic(1000.0) == doctest::Approx(500.0 + 3.0 / std::pow(2.0, 5.0 / 3.0) * 100.0));
    CHECK(rate::psi_asymptotic(1000.0) == doctest::Approx(594.49).epsilon(1e-4));
    const double c = rate::calibrate_asymptotic_constant(1e2, 1e6, 400);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
    for (double delta = 1e2; delta <= 1e6; delta *= 1.3)
      CHECK(std::abs(rate::psi(delta).psi - rate::psi_asymptotic(delta)) <= c * std::cbrt(delta) * (1.0 + 1e-12));
  }

  TEST_CASE("lower tail exponent") {
    CHECK(rate::lower_tail_exponent(0.5) == 0.5);
    CHECK(rate::lower_tail_exponent(0.99) == 0.99);
    CHECK(rate::lower_tail_exponent(0.1) == 0.1);
    CHECK_THROWS_AS(rate::lower_tail_exponent(0.0), DomainError);
    CHECK_THROWS_AS(rate::lower_tail_exponent(1.0), DomainError);
  }
}
