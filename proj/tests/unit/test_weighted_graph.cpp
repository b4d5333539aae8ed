#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "spectail/clique.hpp"
#include "spectail/errors.hpp"
#include "spectail/graph_algorithms.hpp"
#include "spectail/graph_io.hpp"
#include "spectail/network_sampler.hpp"
#include "spectail/spectral.hpp"

using namespace spectail;

namespace {

WeightedGraph petersen() {
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.push_back({i, (i + 1) % 5, 1.0});
    e.push_back({i, i + 5, 1.0});
    e.push_back({5 + i, 5 + (i + 2) % 5, 1.0});
  }
  return WeightedGraph(10, e);
}

WeightedGraph star(int leaves, double w = 1.0) {
  std::vector<Edge> e;
  for (int i = 1; i <= leaves; ++i) e.push_back({0, i, w});
  return WeightedGraph(leaves + 1, e);
}

}  // namespace

TEST_SUITE("weighted_graph") {
  TEST_CASE("construction validates input") {
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 0, 1.0}}), DomainError);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 3, 1.0}}), DomainError);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), DomainError);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, NAN}}), DomainError);
    const WeightedGraph g(4, {{2, 1, 0.5}, {0, 3, -1.0}, {1, 0, 2.0}});
    CHECK(g.num_edges() == 3);
    for (const auto& e : g.edges()) CHECK(e.u < e.v);
    CHECK(g.weight(1, 2) == 0.5);
    CHECK(g.weight(2, 1) == 0.5);
    CHECK(g.weight(2, 3) == 0.0);
    CHECK(g.weight(2, 2) == 0.0);
    const auto a = g.dense();
    for (int i = 0; i < 4; ++i) {
      CHECK(a[i * 4 + i] == 0.0);
      for (int j = 0; j < 4; ++j) CHECK(a[i * 4 + j] == a[j * 4 + i]);
    }
  }

  TEST_CASE("largest eigenvalue examples") {
    const auto tri = largest_eigenvalue(complete_graph(3), 1e-12);
    CHECK(tri.value == doctest::Approx(2.0).epsilon(1e-12));
    for (const double x : tri.vector) CHECK(x == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
    const WeightedGraph edge(2, {{0, 1, 2.5}});
    CHECK(largest_eigenvalue(edge).value == 2.5);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 8);
      const auto g = oracle::random_graph(n, 0.6, 5.0, rng);
      const auto ep = largest_eigenvalue(g, 1e-12);
      CHECK(std::abs(ep.value - oracle::top_eigenvalue(g)) <= 1e-9 * std::max(1.0, std::abs(ep.value)));
    }
    CHECK_THROWS_AS(largest_eigenvalue(edge, 0.0), DomainError);
    CHECK_THROWS_AS(largest_eigenvalue(edge, 1e-2), DomainError);
  }

  TEST_CASE("eigenpair contract on sparse random graphs") {
    Rng rng = make_rng(5);
    for (int n : {50, 400, 3000}) {
      const auto g = sampler::sample_network({n, 2.0, 0}, rng);
      const auto ep = largest_eigenvalue(g);
      double norm = 0.0;
      for (const double x : ep.vector) norm += x * x;
      CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(ep.residual <= 1e-8 * std::max(1.0, std::abs(ep.value)));
      // threshold test agrees with the eigenvalue
      CHECK(top_eigenvalue_below(g, ep.value * (1.0 + 1e-6)));
      CHECK_FALSE(top_eigenvalue_below(g, ep.value * (1.0 - 1e-6)));
    }
  }

  TEST_CASE("threshold test matches the dense oracle") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 11);
      const auto g = oracle::random_graph(n, 0.5, 3.0, rng);
      const double top = oracle::top_eigenvalue(g);
      const double t = std::uniform_real_distribution<double>(0.01, 6.0)(rng);
      if (std::abs(top - t) < 1e-9) continue;
      CHECK(top_eigenvalue_below(g, t) == (top < t));
    }
  }

  TEST_CASE("frobenius norm") {
    for (int k = 2; k <= 8; ++k) CHECK(frobenius_sq(complete_graph(k)) == doctest::Approx(k * k - k));
    CHECK(frobenius_sq(WeightedGraph(4)) == 0.0);
    CHECK(frobenius_sq(WeightedGraph(2, {{0, 1, 3.0}})) == 18.0);
  }

  TEST_CASE("clique number") {
    const auto k5 = max_clique(complete_graph(5));
    CHECK(k5.size == 5);
    CHECK(k5.vertices == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(clique_number(star(6)) == 2);
    CHECK(clique_number(petersen()) == 2);
    CHECK(clique_number(WeightedGraph(3)) == 1);
    Rng rng = make_rng(8);
    for (int trial = 0; trial < 40; ++trial) {
      const auto g = sampler::sample_network({15, 6.0, 0}, rng);
      CHECK(clique_number(g) == oracle::subset_clique_number(g));
    }
    // zero-weight edges are absent
    CHECK(clique_number(WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 0.0}})) == 2);
  }

  TEST_CASE("maximum and maximal cliques") {
    // two disjoint 4-cliques
    std::vector<Edge> e;
    for (int base : {0, 4})
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) e.push_back({base + i, base + j, 1.0});
    const WeightedGraph g(8, e);
    CHECK(all_maximum_cliques(g).size() == 2);
    CHECK(maximal_cliques(g, 4).size() == 2);
    CHECK(maximal_cliques(g, 5).empty());
  }

  TEST_CASE("Motzkin-Straus") {
    const auto tri = motzkin_straus(complete_graph(3));
    CHECK(tri.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    for (const double f : tri.weights) CHECK(f == doctest::Approx(1.0 / 3.0));
    const auto edge = motzkin_straus(WeightedGraph(2, {{0, 1, 1.0}}));
    CHECK(edge.value == doctest::Approx(0.25));
    CHECK(edge.weights[0] == doctest::Approx(0.5));
    CHECK(motzkin_straus(petersen()).value == doctest::Approx(0.25).epsilon(1e-14));
    // star plus a disjoint triangle: uniform transport may stop on an edge
    std::vector<Edge> es;
    for (int i = 1; i <= 6; ++i) es.push_back({0, i, 1.0});
    es.push_back({7, 8, 1.0});
    es.push_back({8, 9, 1.0});
    es.push_back({7, 9, 1.0});
    const auto ms = motzkin_straus(WeightedGraph(10, es));
    CHECK(ms.clique_size == 3);
    CHECK(ms.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(ms.monotone);
  }

  TEST_CASE("mass transport is monotone and ends on a clique") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
      const auto g = oracle::random_graph(9, 0.5, 1.0, rng);
      if (g.num_edges() == 0) continue;
      std::vector<double> f(9, 1.0 / 9.0);
      const auto trace = mass_transport(g, f);
      for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-14);
      std::vector<int> support;
      for (int v = 0; v < 9; ++v)
        if (f[v] > 0.0) support.push_back(v);
      for (std::size_t a = 0; a < support.size(); ++a)
        for (std::size_t b = a + 1; b < support.size(); ++b) CHECK(g.adjacent(support[a], support[b]));
    }
  }

  TEST_CASE("spectral bound gap") {
    for (int k = 2; k <= 8; ++k) CHECK(std::abs(spectral_bound_gap(complete_graph(k))) <= 1e-10);
    // bipartite: lambda_1^2 <= ||A||_F^2 / 2
    const WeightedGraph bip(6, {{0, 3, 1.2}, {0, 4, -0.7}, {1, 4, 2.0}, {2, 5, 0.3}, {1, 5, 1.1}});
    const double l = largest_eigenvalue(bip).value;
    CHECK(l * l <= frobenius_sq(bip) / 2.0 + 1e-12);
    CHECK(spectral_bound_gap(bip) >= frobenius_sq(bip) / 2.0 - l * l - 1e-12);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 11);
      const auto g = oracle::random_graph(n, 0.5, 5.0, rng);
      CHECK(spectral_bound_gap(g) >= -1e-9 * frobenius_sq(g));
    }
  }

  TEST_CASE("summary") {
    const auto s = summarize(complete_graph(4));
    CHECK(s.lambda1 == doctest::Approx(3.0));
    CHECK(s.frob_sq == doctest::Approx(12.0));
    CHECK(s.clique_number == 4);
  }

  TEST_CASE("tree product bound") {
    const WeightedGraph path(2, {{0, 1, 1.0}});
    std::vector<double> half{0.5, 0.5};
    auto b = tree_product_bound(path, half, 0.5);
    CHECK(b.lhs == doctest::Approx(0.25));
    CHECK(b.rhs == doctest::Approx(0.25));
    std::vector<double> quarter(4, 0.25);
    b = tree_product_bound(star(3), quarter, 0.25);
    CHECK(b.lhs == doctest::Approx(3.0 / 16.0));
    CHECK(b.rhs == doctest::Approx(0.1875));
    std::vector<double> zero(4, 0.0);
    b = tree_product_bound(star(3), zero, 0.3);
    CHECK(b.lhs == 0.0);
    CHECK(b.rhs == 0.0);
    CHECK_THROWS_AS(tree_product_bound(complete_graph(3), std::vector<double>(3, 0.1), 0.2), DomainError);
  }

  TEST_CASE("components, excess, degree") {
    const WeightedGraph two(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    const auto comps = connected_components(two);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].num_vertices() == 2);
    CHECK(comps[1].num_vertices() == 2);
    CHECK(connected_components(complete_graph(5)).size() == 1);
    Rng rng = make_rng(12);
    const auto g = sampler::sample_network({1000, 0.5, 0}, rng);
    CHECK(static_cast<int>(connected_components(g).size()) == oracle::bfs_component_count(g));

    CHECK(tree_excess(star(4)) == 0);
    CHECK(tree_excess(WeightedGraph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}})) == 1);
    CHECK(tree_excess(complete_graph(4)) == 3);
    CHECK_THROWS_AS(tree_excess(two), DomainError);

    CHECK(max_degree(star(5)) == 5);
    CHECK(max_degree(WeightedGraph(3)) == 0);
    const auto h = sampler::sample_network({500, 4.0, 0}, rng);
    std::vector<int> deg(500, 0);
    for (const auto& e : h.edges()) {
      ++deg[e.u];
      ++deg[e.v];
    }
    CHECK(max_degree(h) == *std::max_element(deg.begin(), deg.end()));
  }

  TEST_CASE("graph io round trip") {
    Rng rng = make_rng(2);
    const auto g = sampler::sample_network({40, 3.0, 0}, rng);
    std::stringstream ss;
    io::write_edge_list(ss, g);
    CHECK(io::read_edge_list(ss) == g);
    CHECK(io::from_json(io::to_json(g)) == g);
    std::stringstream bad("3 1\n0 5 1.0\n");
    CHECK_THROWS(io::read_edge_list(bad));
  }
}
