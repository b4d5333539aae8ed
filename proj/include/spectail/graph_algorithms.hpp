#pragma once

#include <span>
#include <vector>

#include "spectail/weighted_graph.hpp"

namespace spectail {

/// Vertex partition by connectivity of the support. Components are ordered by
/// their smallest vertex; each lists its vertices in increasing order.
std::vector<std::vector<int>> component_vertex_sets(const WeightedGraph& g);

/// Connected components as subgraphs carrying the parent's vertex labels.
std::vector<WeightedGraph> connected_components(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

/// |E| - |V| + 1 for a connected graph; 0 exactly for trees.
int tree_excess(const WeightedGraph& c);

int max_degree(const WeightedGraph& g);

struct TreeProductBound {
  double lhs = 0.0;  // sum over edges of v_i v_j
  double rhs = 0.0;  // s^2/4 if s < 2 eta, else eta (s - eta)
};

/// Product bound for nonnegative vertex values on a tree, each at most eta.
/// Throws DomainError for cyclic/disconnected input or out-of-range values,
/// InvariantError if lhs > rhs + 1e-12.
TreeProductBound tree_product_bound(const WeightedGraph& tree, std::span<const double> values, double eta);

struct MotzkinStrausResult {
  double value = 0.0;                 // max of sum_{i~j} f_i f_j over the simplex
  std::vector<double> weights;        // maximizer f (uniform on a maximum clique)
  int clique_size = 0;                // k
  double best_unseeded_value = 0.0;   // best terminal value of the transport runs from generic starts
  int runs = 0;                       // number of transport runs performed
  bool monotone = true;               // objective never decreased along any run
};

/// One run of the mass-transport reduction from starting point `f` (entries
/// >= 0, summing to 1). While the support contains a non-adjacent pair, the
/// vertex with the smaller neighbourhood mass hands all of its mass to the
/// other (ties go to the lower index). Returns the objective after every
/// step; `f` is left uniform on the terminal clique.
std::vector<double> mass_transport(const WeightedGraph& g, std::vector<double>& f);

/// sum_{i<j, i~j} f_i f_j over the support of g.
double simplex_objective(const WeightedGraph& g, std::span<const double> f);

/// Maximizes the simplex quadratic form of the support (weights ignored).
/// Runs mass transport from the barycentre, from every closed neighbourhood,
/// and from the maximum clique found by exact search; the transport
/// certificate bounds every run by (m-1)/(2m) <= (k-1)/(2k).
/// Throws InvariantError when the result disagrees with (k-1)/(2k) by more
/// than 1e-12 or a run is non-monotone.
MotzkinStrausResult motzkin_straus(const WeightedGraph& g);

}  // namespace spectail
