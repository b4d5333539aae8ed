#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spectail/clique.hpp"
#include "spectail/errors.hpp"
#include "spectail/rate_theory.hpp"
#include "spectail/spectral.hpp"
#include "spectail/stats.hpp"
#include "spectail/tail_lab.hpp"

using namespace spectail;
using namespace spectail::tails;

TEST_SUITE("tail_lab") {
  TEST_CASE("gaussian tail sandwich") {
    const auto b2 = gaussian_tail_bounds(2.0);
    CHECK(b2.lower == doctest::Approx(0.02160).epsilon(1e-3));
    CHECK(b2.upper == doctest::Approx(0.02699).epsilon(1e-3));
    const double q2 = std::exp(oracle::log_normal_tail_quadrature(2.0));
    CHECK(b2.lower < q2);
    CHECK(q2 < b2.upper);
    const auto b10 = gaussian_tail_bounds(10.0);
    CHECK(b10.lower / b10.upper == doctest::Approx(100.0 / 101.0).epsilon(1e-12));
    const double lq10 = oracle::log_normal_tail_quadrature(10.0);
    CHECK(b10.log_lower < lq10);
    CHECK(lq10 < b10.log_upper);
    const auto b50 = gaussian_tail_bounds(50.0);
    CHECK(std::abs(std::exp(b50.log_lower - b50.log_upper) - 2500.0 / 2501.0) < 1e-3);
    CHECK_THROWS_AS(gaussian_tail_bounds(0.0), DomainError);
    CHECK_THROWS_AS(gaussian_tail_bounds(-1.0), DomainError);
  }

  TEST_CASE("max gaussian bounds") {
    Rng rng = make_rng(9);
    std::normal_distribution<double> nd;
    const int n = 1000;
    const auto b = max_gaussian_bounds(1000, n, 0.3, 1.0);
    const int trials = 100000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
      double mx = -1e300;
      for (int i = 0; i < 1000; ++i) mx = std::max(mx, nd(rng));
      hits += mx >= b.level;
    }
    const double p = static_cast<double>(hits) / trials;
    CHECK(p + 3.0 * std::sqrt(p * (1 - p) / trials) >= b.upper_event_lower);
    CHECK(b.c_prime == doctest::Approx(b.upper_event_lower * std::sqrt(std::log(1000.0)) * std::pow(1000.0, 0.3)));

    const auto b0 = max_gaussian_bounds(1000, n, 0.0, 1.0);
    CHECK(b0.upper_event_lower > 0.05);
    const auto b2 = max_gaussian_bounds(2000, n, 0.3, 2.0);
    CHECK(b2.upper_event_lower > b.upper_event_lower);
    CHECK(b2.lower_event_upper < b.lower_event_upper);
    CHECK_THROWS_AS(max_gaussian_bounds(10, n, 0.3, 1.0), DomainError);
  }

  TEST_CASE("chi tail constant bounds the conditioned MGF") {
    // E exp(t Y^2 | |Y| > tau) = Phibar(u tau) / (u Phibar(tau)), u = sqrt(1 - 2t)
    double worst = 0.0;
    for (double tau = 0.0; tau <= 12.0; tau += 0.05) {
      for (double t = 0.0; t < 0.5; t += 0.01) {
        const double u = std::sqrt(1.0 - 2.0 * t);
        const double log_mgf = stats::log_normal_tail(u * tau) - std::log(u) - stats::log_normal_tail(tau);
        const double log_ref = t * tau * tau - std::log(1.0 - 2.0 * t);
        worst = std::max(worst, std::exp(log_mgf - log_ref));
      }
    }
    CHECK(worst <= kChiTailConstant);
  }

  TEST_CASE("chi tail bound") {
    // eps -> 0, m = 1: dominates the exact chi-square(1) tail
    CHECK(chi_tail_bound(1, 10.0, 1e-9, 1000) >= stats::chi_square_tail(1, 10.0));
    CHECK(chi_tail_bound(1, 1.0000001, 0.1, 1000) == 1.0);
    CHECK_THROWS_AS(chi_tail_bound(5, 5.0, 0.1, 1000), DomainError);
    CHECK_THROWS_AS(chi_tail_bound(5, 4.0, 0.1, 1000), DomainError);
    CHECK_THROWS_AS(chi_tail_bound(1, 3.0, 0.1, 10), DomainError);
    const double n = 1e6;
    CHECK(chi_tail_power_bound(4.0, 2.0, 0.1, 0.05, 1000000) ==
          doctest::Approx(std::pow(n, -2.0 + 0.1 + 0.05)).epsilon(1e-12));
    // MC at m = 2, L = 12
    Rng rng = make_rng(10);
    const double tau = std::sqrt(0.1 * std::log(std::log(n)));
    const int trials = 200000;
    int hits = 0;
    for (int i = 0; i < trials; ++i) {
      double s = 0.0;
      for (int j = 0; j < 2; ++j) {
        const double y = sampler::sample_truncated_gaussian(tau, rng);
        s += y * y;
      }
      hits += s >= 12.0;
    }
    const double p = static_cast<double>(hits) / trials;
    CHECK(p - 3.0 * std::sqrt(p * (1 - p) / trials) <= chi_tail_bound(2, 12.0, 0.1, 1000000));
  }

  TEST_CASE("component tail bound") {
    ComponentBoundParams p;
    p.eta = 0.05;
    p.c3 = 1.0;
    p.alpha = 2.0;
    p.k = 3;
    p.epsilon = 0.01;
    p.gamma = 0.01;
    const auto b = component_tail_bound(p, 1000000);
    CHECK(b.theta == std::pow(2.0 * p.eta * p.eta + 2.0 * std::pow(p.eta, 4) * p.c3, 0.25));
    CHECK(b.first < b.second);
    CHECK(b.total <= 1.0);
    CHECK(b.total >= 0.0);
    ComponentBoundParams bad = p;
    bad.eta = 0.6;
    CHECK_THROWS_AS(component_tail_bound(bad, 1000), DomainError);
    bad = p;
    bad.k = 1;
    CHECK_THROWS_AS(component_tail_bound(bad, 1000), DomainError);
  }

  TEST_CASE("component tail bound dominates component MC") {
    // Small trees and unicyclic components with heavy conditioned weights.
    ComponentBoundParams p;
    p.eta = 0.2;
    p.c1 = 1.0;
    p.c2 = 1.0;
    p.c3 = 1.0;
    p.alpha = 0.6;
    p.gamma = 0.05;
    p.epsilon = 0.01;
    p.k = 2;
    const int n = 1000;
    const double bound = component_tail_bound(p, n).total;
    const double level = std::sqrt(2.0 * p.alpha * std::log(static_cast<double>(n)));
    const double tau = std::sqrt(p.epsilon * std::log(std::log(static_cast<double>(n))));
    std::mt19937_64 shapes(12);
    Rng rng = make_rng(13);
    int exceed = 0;
    for (int shape = 0; shape < 50; ++shape) {
      const int size = 2 + static_cast<int>(shapes() % 4);
      std::vector<Edge> edges;
      for (int v = 1; v < size; ++v) edges.push_back({static_cast<int>(shapes() % v), v, 1.0});
      if (size >= 3 && shapes() % 2) {
        // close one cycle when a non-edge exists
        for (int a = 0; a < size && edges.size() < static_cast<std::size_t>(size); ++a)
          for (int c = a + 1; c < size; ++c) {
            bool present = false;
            for (const auto& e : edges) present |= (e.u == a && e.v == c) || (e.u == c && e.v == a);
            if (!present) {
              edges.push_back({a, c, 1.0});
              break;
            }
          }
      }
      const int draws = 2000;
      int hits = 0;
      for (int t = 0; t < draws; ++t) {
        auto es = edges;
        for (auto& e : es) e.w = sampler::sample_truncated_gaussian(tau, rng);
        hits += largest_eigenvalue(WeightedGraph(size, es)).value >= level;
      }
      const double ph = static_cast<double>(hits) / draws;
      if (ph - 3.0 * std::sqrt(std::max(ph * (1 - ph), 1e-12) / draws) > bound) ++exceed;
    }
    CHECK(exceed == 0);
  }

  TEST_CASE("expected subgraph bound") {
    CHECK_THROWS_AS(expected_subgraph_bound(60, 2, 0, 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(expected_subgraph_bound(60, 4, 3, 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(expected_subgraph_bound(60, 4, -1, 1.0, 2.0), DomainError);
    const auto plan = sampler::make_plan(60, 2.0, 1.0, 1e-9);
    // exact expectation of triangles in the heavy support
    const auto b3 = expected_subgraph_bound(60, 3, 0, 1.0, 2.0);
    const double exact3 = expected_subgraph_count(60, 3, 0, plan.q_exact);
    CHECK(exact3 == doctest::Approx(60.0 * 59.0 * 58.0 / 6.0 * std::pow(plan.q_exact, 3)));
    CHECK(exact3 <= b3.value);
    const auto bn = expected_subgraph_bound(16, 16, 0, 1.0, 2.0);
    CHECK(std::isfinite(bn.value));
    CHECK(bn.min_form <= 1.0);

    // MC: 4 vertices, 4 edges
    const auto b4 = expected_subgraph_bound(60, 4, 0, 1.0, 2.0);
    Rng rng = make_rng(14);
    double total = 0.0;
    const int reps = 500;
    for (int r = 0; r < reps; ++r) {
      const auto heavy = sampler::decompose(sampler::sample_network({60, 2.0, 0}, rng), plan).heavy;
      for (int a = 0; a < 60; ++a)
        for (int b = a + 1; b < 60; ++b)
          for (int c = b + 1; c < 60; ++c)
            for (int d = c + 1; d < 60; ++d) {
              const int e = heavy.adjacent(a, b) + heavy.adjacent(a, c) + heavy.adjacent(a, d) +
                            heavy.adjacent(b, c) + heavy.adjacent(b, d) + heavy.adjacent(c, d);
              if (e >= 4) total += e == 4 ? 1 : (e == 5 ? 5 : 15);
            }
    }
    const double mean = total / reps;
    CHECK(mean <= b4.value);
    CHECK(expected_subgraph_count(60, 4, 0, plan.q_exact) <= b4.value);
  }

  TEST_CASE("planted exponent argmax equals the rate minimizers") {
    for (double delta : {1.0, 3.0, 10.0, 23.0}) {
      CHECK(planted_argmax(delta, 6) == rate::psi(delta).minimizers);
      for (int k = 2; k <= 6; ++k) CHECK(planted_exponent(k, delta) == doctest::Approx(-rate::phi(delta, k)));
    }
  }

  TEST_CASE("clique existence scaling") {
    McConfig cfg{15, 1, 256};
    const auto tri = clique_existence_scaling({64, 128, 256, 512}, 3, 2.0, 20000, cfg);
    REQUIRE(tri.fitted);
    CHECK(tri.predicted_slope == 0.0);
    CHECK(std::abs(tri.fit.slope) < 0.15);
    const auto k4 = clique_existence_scaling({16, 32, 64}, 4, 2.0, 200000, cfg);
    REQUIRE(k4.fitted);
    CHECK(k4.predicted_slope == -2.0);
    CHECK(std::abs(k4.fit.slope + 2.0) <= 0.5);
    const auto none = clique_existence_scaling({64, 128, 256}, 3, 0.0, 1000, cfg);
    for (const auto& e : none.per_n) CHECK(e.hits == 0);
    CHECK_FALSE(none.fitted);
  }

  TEST_CASE("naive estimator") {
    McConfig cfg{16, 1, 256};
    CHECK_THROWS_AS(upper_tail_naive({128, 2.0, 0}, 0.5, 0, cfg), DomainError);
    const auto rare = upper_tail_naive({128, 2.0, 0}, 50.0, 200, cfg);
    CHECK(rare.hits == 0);
    CHECK(rare.ci_low == 0.0);
    CHECK(rare.ci_high > 0.0);
    // same stream, shrinking event
    long long prev = 1LL << 60;
    for (double delta : {0.2, 0.5, 1.0, 2.0}) {
      const auto e = upper_tail_naive({256, 2.0, 0}, delta, 2000, cfg);
      CHECK(e.ci_low <= e.probability);
      CHECK(e.probability <= e.ci_high);
      CHECK(e.hits <= prev);
      prev = e.hits;
    }
    const auto adaptive = upper_tail_naive_adaptive({256, 2.0, 0}, 1.0, 200, 256, 1 << 20, cfg);
    CHECK(adaptive.hits >= 200);
    CHECK(adaptive.trials % 256 == 0);
  }

  TEST_CASE("thread count does not change results") {
    McConfig one{17, 1, 64}, four{17, 4, 64};
    const sampler::ModelParams params{256, 2.0, 0};
    const auto a = upper_tail_naive(params, 0.5, 1000, one);
    const auto b = upper_tail_naive(params, 0.5, 1000, four);
    CHECK(a.hits == b.hits);
    const auto u1 = upper_tail_union_bound(params, 0.5, 300, one);
    const auto u4 = upper_tail_union_bound(params, 0.5, 300, four);
    CHECK(u1.probability == u4.probability);
  }

  TEST_CASE("planted lower bound and union bound") {
    McConfig cfg{18, 1, 256};
    const sampler::ModelParams params{256, 2.0, 0};
    const auto naive = upper_tail_naive(params, 0.5, 3000, cfg);
    for (int k : {2, 3, 4}) {
      const auto lo = upper_tail_planted_lower(params, 0.5, k, 3000, cfg);
      CHECK(lo.method == Method::planted_lower_bound);
      CHECK(lo.probability <= naive.ci_high);
    }
    const auto up = upper_tail_union_bound(params, 0.5, 500, cfg);
    CHECK(naive.ci_low <= up.probability);
    // single edge support: exact two-sided tail
    const WeightedGraph edge(5, {{0, 1, 0.3}});
    CHECK(union_bound_given_support(edge, 2.0) == doctest::Approx(2.0 * stats::normal_tail(2.0)));
    CHECK_THROWS_AS(upper_tail_planted_lower(params, 0.5, 1, 10, cfg), DomainError);
  }

  TEST_CASE("lower tail") {
    McConfig cfg{19, 1, 256};
    CHECK_THROWS_AS(lower_tail_mc({128, 1.0, 0}, 0.0, 10, cfg), DomainError);
    CHECK_THROWS_AS(lower_tail_mc({128, 1.0, 0}, 1.0, 10, cfg), DomainError);
    const auto near_one = lower_tail_mc({512, 2.0, 0}, 0.999, 500, cfg);
    CHECK(near_one.hits == 0);
    CHECK(near_one.ci_high > 0.0);
    const auto a = lower_tail_mc({256, 1.0, 0}, 0.1, 2000, cfg);
    const auto b = lower_tail_mc({256, 1.0, 0}, 0.1, 2000, cfg);
    CHECK(a.hits == b.hits);
    const auto c = lower_tail_mc({256, 1.0, 0}, 0.3, 2000, cfg);
    CHECK(c.hits <= a.hits);
  }

  TEST_CASE("fit_exponent") {
    std::vector<std::pair<int, double>> exact;
    for (int n : {128, 256, 512, 1024}) exact.emplace_back(n, std::pow(n, -1.5));
    const auto f = fit_exponent(exact);
    CHECK(std::abs(f.slope + 1.5) < 1e-12);
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    std::vector<std::pair<int, double>> noisy;
    for (int n : {128, 256, 512, 1024, 2048}) noisy.emplace_back(n, 2.0 * std::pow(n, -rate::psi(3.0).psi) * (1 + noise(rng)));
    const auto g = fit_exponent(noisy);
    CHECK(std::abs(g.slope + 3.0) < 0.1);
    CHECK(g.slope_ci_low <= g.slope);
    CHECK(g.slope <= g.slope_ci_high);
    CHECK_THROWS_AS(fit_exponent({{128, 0.1}, {256, 0.0}, {512, 0.01}}), DomainError);
    CHECK_THROWS_AS(fit_exponent({{128, 0.1}, {256, 0.05}}), DomainError);
    CHECK_THROWS_AS(fit_exponent({{256, 0.1}, {128, 0.05}, {512, 0.01}}), DomainError);
  }
}
