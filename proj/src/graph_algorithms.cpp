#include "spectail/graph_algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spectail/clique.hpp"
#include "spectail/errors.hpp"

namespace spectail {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace

std::vector<std::vector<int>> component_vertex_sets(const WeightedGraph& g) {
  const int n = g.num_vertices();
  DisjointSets sets(n);
  for (const auto& e : g.edges()) {
    if (e.w != 0.0) sets.unite(e.u, e.v);
  }
  std::vector<int> slot(n, -1);
  std::vector<std::vector<int>> out;
  for (int v = 0; v < n; ++v) {
    const int r = sets.find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(v);
  }
  return out;
}

std::vector<WeightedGraph> connected_components(const WeightedGraph& g) {
  std::vector<WeightedGraph> out;
  for (const auto& vs : component_vertex_sets(g)) out.push_back(g.induced(vs));
  return out;
}

bool is_connected(const WeightedGraph& g) { return g.num_vertices() <= 1 || component_vertex_sets(g).size() == 1; }

int tree_excess(const WeightedGraph& c) {
  if (c.num_vertices() == 0 || !is_connected(c)) throw DomainError("tree_excess requires a connected graph");
  std::size_t support_edges = 0;
  for (const auto& e : c.edges()) support_edges += e.w != 0.0;
  return static_cast<int>(support_edges) - c.num_vertices() + 1;
}

int max_degree(const WeightedGraph& g) {
  int d = 0;
  for (int v = 0; v < g.num_vertices(); ++v) d = std::max(d, g.degree(v));
  return d;
}

TreeProductBound tree_product_bound(const WeightedGraph& tree, std::span<const double> values, double eta) {
  if (static_cast<int>(values.size()) != tree.num_vertices()) throw DomainError("one value per vertex expected");
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  if (tree.num_vertices() == 0 || tree_excess(tree) != 0) throw DomainError("tree_product_bound requires a tree");
  double s = 0.0;
  for (const double v : values) {
    if (v < 0.0 || v > eta) throw DomainError("values must lie in [0, eta]");
    s += v;
  }
  TreeProductBound b;
  for (const auto& e : tree.edges()) {
    if (e.w != 0.0) b.lhs += values[e.u] * values[e.v];
  }
  b.rhs = s < 2.0 * eta ? s * s / 4.0 : eta * (s - eta);
  if (b.lhs > b.rhs + 1e-12) throw InvariantError("tree product bound violated");
  return b;
}

double simplex_objective(const WeightedGraph& g, std::span<const double> f) {
  double s = 0.0;
  for (const auto& e : g.edges()) {
    if (e.w != 0.0) s += f[e.u] * f[e.v];
  }
  return s;
}

std::vector<double> mass_transport(const WeightedGraph& g, std::vector<double>& f) {
  const int n = g.num_vertices();
  std::vector<double> trace{simplex_objective(g, f)};
  std::vector<double> nbr_mass(n, 0.0);

  for (;;) {
    std::vector<int> support;
    for (int v = 0; v < n; ++v) {
      if (f[v] > 0.0) support.push_back(v);
    }
    for (const int v : support) {
      double s = 0.0;
      for (const int u : g.neighbors(v)) s += f[u];
      nbr_mass[v] = s;
    }
    // Donor: lightest-neighbourhood support vertex that still has a
    // non-neighbour in the support. Receiver: its heaviest such non-neighbour.
    int donor = -1;
    for (const int v : support) {
      if (donor >= 0 && nbr_mass[v] >= nbr_mass[donor]) continue;
      const bool has_gap = std::any_of(support.begin(), support.end(),
                                       [&](int u) { return u != v && !g.adjacent(u, v); });
      if (has_gap) donor = v;
    }
    if (donor < 0) break;
    int receiver = -1;
    for (const int u : support) {
      if (u == donor || g.adjacent(u, donor)) continue;
      if (receiver < 0 || nbr_mass[u] > nbr_mass[receiver]) receiver = u;
    }
    // Equal neighbourhood masses: mass goes to the lower index.
    if (nbr_mass[receiver] == nbr_mass[donor] && donor < receiver) std::swap(donor, receiver);
    f[receiver] += f[donor];
    f[donor] = 0.0;
    trace.push_back(simplex_objective(g, f));
  }

  // The support is now a clique; the uniform vector on it is optimal there.
  std::vector<int> clique;
  for (int v = 0; v < n; ++v) {
    if (f[v] > 0.0) clique.push_back(v);
  }
  for (int v = 0; v < n; ++v) f[v] = 0.0;
  for (const int v : clique) f[v] = 1.0 / static_cast<double>(clique.size());
  trace.push_back(simplex_objective(g, f));
  return trace;
}

MotzkinStrausResult motzkin_straus(const WeightedGraph& g) {
  const int n = g.num_vertices();
  bool has_edge = false;
  for (const auto& e : g.edges()) has_edge = has_edge || e.w != 0.0;
  if (!has_edge) throw DomainError("motzkin_straus requires at least one edge");

  MotzkinStrausResult res;
  const auto clique = max_clique(g);
  res.clique_size = clique.size;
  const double target = (clique.size - 1.0) / (2.0 * clique.size);

  auto run = [&](std::vector<double> f, bool seeded) {
    const auto trace = mass_transport(g, f);
    ++res.runs;
    for (std::size_t i = 1; i < trace.size(); ++i) {
      // Round-off in the objective sum is O(n^2 eps).
      if (trace[i] < trace[i - 1] - 1e-14) res.monotone = false;
    }
    const double value = trace.back();
    if (value > target + 1e-12) {
      throw InvariantError("mass transport exceeded (k-1)/(2k): " + std::to_string(value));
    }
    if (!seeded) res.best_unseeded_value = std::max(res.best_unseeded_value, value);
    if (value > res.value || res.weights.empty()) {
      res.value = value;
      res.weights = std::move(f);
    }
  };

  run(std::vector<double>(n, 1.0 / n), false);
  for (int v = 0; v < n; ++v) {
    if (g.degree(v) == 0) continue;
    std::vector<double> f(n, 0.0);
    const double share = 1.0 / (g.degree(v) + 1.0);
    f[v] = share;
    for (const int u : g.neighbors(v)) f[u] = share;
    run(std::move(f), false);
  }
  std::vector<double> seeded(n, 0.0);
  for (const int v : clique.vertices) seeded[v] = 1.0 / clique.size;
  run(std::move(seeded), true);

  if (!res.monotone) throw InvariantError("mass transport objective decreased");
  if (std::abs(res.value - target) > 1e-12) {
    throw InvariantError("Motzkin-Straus value " + std::to_string(res.value) + " differs from (k-1)/(2k) = " +
                         std::to_string(target));
  }
  return res;
}

}  // namespace spectail
