#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "spectail/errors.hpp"
#include "spectail/stats.hpp"

using namespace spectail;

TEST_SUITE("stats") {
  TEST_CASE("normal tail") {
    CHECK(stats::normal_tail(2.0) == doctest::Approx(0.0227501319).epsilon(1e-9));
    for (double t : {0.5, 3.0, 10.0, 29.0, 31.0, 45.0})
      CHECK(stats::log_normal_tail(t) == doctest::Approx(oracle::log_normal_tail_quadrature(t)).epsilon(1e-10));
    for (double lq : {-0.7, -5.0, -100.0, -700.0, -5000.0}) {
      const double t = stats::normal_tail_inverse_log(lq);
      CHECK(stats::log_normal_tail(t) == doctest::Approx(lq).epsilon(1e-9));
    }
  }

  TEST_CASE("chi-square tail") {
    CHECK(stats::chi_square_tail(1, 4.0) == doctest::Approx(2.0 * stats::normal_tail(2.0)).epsilon(1e-12));
    CHECK(stats::chi_square_tail(2, 3.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
  }

  TEST_CASE("Clopper-Pearson") {
    const auto zero = stats::clopper_pearson(0, 100);
    CHECK(zero.low == 0.0);
    CHECK(zero.high == doctest::Approx(1.0 - std::pow(0.025, 1.0 / 100)).epsilon(1e-10));
    const auto all = stats::clopper_pearson(50, 50);
    CHECK(all.high == 1.0);
    const auto mid = stats::clopper_pearson(30, 100);
    CHECK(mid.low < 0.3);
    CHECK(mid.high > 0.3);
    CHECK(mid.low == doctest::Approx(0.2124).epsilon(1e-3));
    CHECK(mid.high == doctest::Approx(0.3998).epsilon(1e-3));
  }

  TEST_CASE("least squares") {
    std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = stats::least_squares(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.slope_se == doctest::Approx(0.0));
    CHECK(stats::student_t_quantile(0.95, 1e6) == doctest::Approx(1.96).epsilon(1e-3));
    std::vector<double> m{3, 1, 2};
    CHECK(stats::median(m) == 2.0);
  }
}
