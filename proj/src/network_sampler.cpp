#include "spectail/network_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectail/errors.hpp"
#include "spectail/graph_algorithms.hpp"
#include "spectail/stats.hpp"

namespace spectail::sampler {

void ModelParams::validate() const {
  if (n < 2) throw DomainError("n must be at least 2");
  if (!(d >= 0.0) || !(d < n)) throw DomainError("average degree d must satisfy 0 <= d < n");
}

DecompositionPlan make_plan(int n, double d, double epsilon, double delta) {
  if (n < 16) throw DomainError("the sparsification threshold needs n >= 16 (log log n > 0)");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0, 1]");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (!(d > 0.0 && d < n)) throw DomainError("average degree d must satisfy 0 < d < n");
  DecompositionPlan plan;
  plan.n = n;
  plan.d = d;
  plan.epsilon = epsilon;
  plan.delta = delta;
  const double logn = std::log(static_cast<double>(n));
  plan.threshold = std::sqrt(epsilon * std::log(logn));
  const double root = std::sqrt(2.0 * (1.0 + delta)) - std::sqrt(epsilon) * (1.0 + delta);
  if (!(root > 0.0)) throw DomainError("epsilon too large for delta: sqrt(2(1+delta')) would be nonpositive");
  plan.delta_prime = root * root / 2.0 - 1.0;
  const double lower = delta - std::sqrt(2.0 * epsilon) * std::pow(1.0 + delta, 1.5);
  if (plan.delta_prime > delta || plan.delta_prime < lower) {
    throw DomainError("epsilon too large for delta: delta' = " + std::to_string(plan.delta_prime) +
                      " leaves [delta - sqrt(2 eps)(1+delta)^{3/2}, delta]");
  }
  const double d_prime = d / std::sqrt(2.0 * M_PI);
  plan.q_bound = d_prime / (n * std::pow(logn, epsilon / 2.0));
  plan.q_exact = d / n * 2.0 * stats::normal_tail(plan.threshold);
  return plan;
}

WeightedGraph sample_network(const ModelParams& params, Rng& rng) {
  params.validate();
  const int n = params.n;
  const double p = params.p();
  std::vector<Edge> edges;
  if (p <= 0.0) return WeightedGraph(n);
  edges.reserve(static_cast<std::size_t>(params.d * n / 2.0 * 1.2) + 16);
  std::normal_distribution<double> normal;
  const double log_q = std::log1p(-p);
  // Walk the pairs (0,1), (0,2), ..., (n-2,n-1) with geometric skips.
  int i = 0;
  long long j = 0;  // current candidate is (i, i + 1 + j)
  for (;;) {
    const double u = uniform_open(rng);
    const double skip = std::floor(std::log(u) / log_q);
    long long s = skip > 1e15 ? static_cast<long long>(1e15) : static_cast<long long>(skip);
    j += s;
    while (i < n - 1 && j >= n - 1 - i) {
      j -= n - 1 - i;
      ++i;
    }
    if (i >= n - 1) break;
    edges.push_back({i, static_cast<int>(i + 1 + j), normal(rng)});
    ++j;
  }
  return WeightedGraph(n, std::move(edges));
}

double sample_upper_tail_gaussian(double t, Rng& rng) {
  const double u = uniform_open(rng);
  if (t <= 0.0) {
    // P(Y > t) >= 1/2: invert the upper tail directly.
    const double q = u * stats::normal_tail(t);
    return q <= 0.5 ? stats::normal_tail_inverse_log(std::log(q)) : -stats::normal_tail_inverse_log(std::log1p(-q));
  }
  return stats::normal_tail_inverse_log(std::log(u) + stats::log_normal_tail(t));
}

double sample_truncated_gaussian(double t, Rng& rng) {
  if (t < 0.0) throw DomainError("truncation level must be nonnegative");
  const double magnitude = sample_upper_tail_gaussian(t, rng);
  return uniform01(rng) < 0.5 ? -magnitude : magnitude;
}

Decomposition decompose(const WeightedGraph& z, double threshold) {
  std::vector<Edge> heavy, light;
  for (const auto& e : z.edges()) (std::abs(e.w) > threshold ? heavy : light).push_back(e);
  return {WeightedGraph(z.num_vertices(), std::move(heavy)), WeightedGraph(z.num_vertices(), std::move(light))};
}

double upper_level(int n, double delta) { return std::sqrt(2.0 * (1.0 + delta) * std::log(static_cast<double>(n))); }

double lower_level(int n, double delta) {
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - delta) * std::log(static_cast<double>(n))));
}

PlantedNetwork plant_clique(const ModelParams& params, int k, double delta, Rng& rng) {
  params.validate();
  if (k < 2 || k > params.n) throw DomainError("planted clique size must satisfy 2 <= k <= n");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const auto background = sample_network(params, rng);

  // Floyd's algorithm for a uniform k-subset.
  std::vector<int> chosen;
  std::vector<char> in_set(params.n, 0);
  for (int r = params.n - k; r < params.n; ++r) {
    const int t = std::uniform_int_distribution<int>(0, r)(rng);
    const int pick = in_set[t] ? r : t;
    in_set[pick] = 1;
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());

  PlantedNetwork out;
  out.level = upper_level(params.n, delta) / (k - 1);
  std::vector<Edge> edges;
  for (const auto& e : background.edges()) {
    if (!(in_set[e.u] && in_set[e.v])) edges.push_back(e);
  }
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) edges.push_back({chosen[a], chosen[b], sample_upper_tail_gaussian(out.level, rng)});
  out.graph = WeightedGraph(params.n, std::move(edges));
  out.clique = std::move(chosen);
  return out;
}

ComponentDiagnostics diagnostics(const WeightedGraph& g, const ComponentThresholds& th) {
  const int n = g.num_vertices();
  if (n < 16) throw DomainError("diagnostics need n >= 16");
  if (!(th.epsilon > 0.0)) throw DomainError("epsilon must be positive");
  ComponentDiagnostics out;
  out.n = n;
  const double logn = std::log(static_cast<double>(n));
  const double scale = logn / std::log(logn);
  out.max_degree = max_degree(g);
  out.max_degree_ok = out.max_degree <= (1.0 + th.delta1) * scale;

  const double size_cap = (2.0 + th.delta2) / th.epsilon * scale;
  std::vector<int> comp_of(n, -1);
  const auto comps = component_vertex_sets(g);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (const int v : comps[c]) comp_of[v] = static_cast<int>(c);
  std::vector<int> edge_count(comps.size(), 0);
  for (const auto& e : g.edges())
    if (e.w != 0.0) ++edge_count[comp_of[e.u]];

  for (std::size_t c = 0; c < comps.size(); ++c) {
    const int size = static_cast<int>(comps[c].size());
    if (size < 2) continue;
    const int excess = edge_count[c] - size + 1;
    out.component_sizes.push_back(size);
    out.edge_counts.push_back(edge_count[c]);
    out.tree_excesses.push_back(excess);
    if (size > size_cap) out.component_size_ok = false;
    if (!(edge_count[c] < size + th.delta3)) out.excess_ok = false;
    if (excess > 0) ++out.num_non_tree;
  }
  out.all_trees = out.num_non_tree == 0;
  out.few_cycles = out.num_non_tree < logn;
  return out;
}

}  // namespace spectail::sampler
