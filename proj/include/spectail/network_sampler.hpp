#pragma once
// Sparse Gaussian networks Z = X ⊙ Y: X an Erdős–Rényi graph G(n, d/n), Y
// independent standard Gaussian conductances on its edges.

#include <cstdint>
#include <vector>

#include "spectail/rng.hpp"
#include "spectail/weighted_graph.hpp"

namespace spectail::sampler {

struct ModelParams {
  int n = 0;
  double d = 0.0;  // average degree; edge probability p = d/n
  std::uint64_t seed = 0;

  double p() const { return d / n; }
  /// Throws DomainError unless n >= 2 and 0 <= d < n.
  void validate() const;
};

/// Sparsification split of Z by the weight threshold sqrt(eps log log n).
struct DecompositionPlan {
  int n = 0;
  double d = 0.0;
  double epsilon = 0.0;
  double threshold = 0.0;    // sqrt(eps log log n)
  double delta = 0.0;        // target tail excess
  double delta_prime = 0.0;  // sqrt(2(1+delta')) = sqrt(2(1+delta)) - sqrt(eps)(1+delta)
  double q_bound = 0.0;      // d' / (n (log n)^{eps/2}),  d' = d / sqrt(2 pi)
  /// Exact probability that a pair is an edge of Z^(1): (d/n) P(|Y| > threshold).
  double q_exact = 0.0;
};

/// Throws DomainError for n < 16 (log log n <= 0), eps outside (0, 1], or an
/// epsilon too large for delta to admit delta'.
DecompositionPlan make_plan(int n, double d, double epsilon, double delta);

struct ComponentThresholds {
  double delta1 = 1.0;  // max-degree cap (1 + delta1) log n / log log n
  double delta2 = 1.0;  // component-size cap (2 + delta2)/eps * log n / log log n
  double delta3 = 1.0;  // excess cap |E(C)| < |V(C)| + delta3
  double epsilon = 0.5;
};

struct ComponentDiagnostics {
  int n = 0;
  std::vector<int> component_sizes;  // components with >= 2 vertices, in vertex order
  std::vector<int> edge_counts;      // |E(C)| for the same components
  std::vector<int> tree_excesses;    // |E(C)| - |V(C)| + 1
  int max_degree = 0;
  int num_non_tree = 0;
  bool max_degree_ok = true;   // D_{delta1}
  bool component_size_ok = true;  // C_{delta2}
  bool excess_ok = true;       // E_{delta3}
  bool all_trees = true;       // T
  bool few_cycles = true;      // fewer than log n non-tree components
};

WeightedGraph sample_network(const ModelParams& params, Rng& rng);

/// N(0,1) conditioned on |value| > t, by inverting the tail CDF in log space
/// (no rejection). t = 0 gives a plain standard Gaussian.
double sample_truncated_gaussian(double t, Rng& rng);

/// N(0,1) conditioned on value >= t (one-sided), by tail-CDF inversion.
double sample_upper_tail_gaussian(double t, Rng& rng);

struct Decomposition {
  WeightedGraph heavy;  // Z^(1): |weight| > threshold
  WeightedGraph light;  // Z^(2): the rest
};

Decomposition decompose(const WeightedGraph& z, double threshold);
inline Decomposition decompose(const WeightedGraph& z, const DecompositionPlan& plan) {
  return decompose(z, plan.threshold);
}

struct PlantedNetwork {
  WeightedGraph graph;
  std::vector<int> clique;  // planted vertex set S, sorted
  double level = 0.0;       // sqrt(2(1+delta) log n) / (k-1)
};

/// Background network plus a planted k-clique on a uniform k-subset. Clique
/// weights replace any background weights and are N(0,1) conditioned to be
/// >= level, so lambda_1 >= (k-1) level = sqrt(2(1+delta) log n).
PlantedNetwork plant_clique(const ModelParams& params, int k, double delta, Rng& rng);

ComponentDiagnostics diagnostics(const WeightedGraph& g, const ComponentThresholds& th);

/// sqrt(2 (1 + delta) log n).
double upper_level(int n, double delta);

/// sqrt(2 (1 - delta) log n), clamped at 0 for delta >= 1.
double lower_level(int n, double delta);

}  // namespace spectail::sampler
