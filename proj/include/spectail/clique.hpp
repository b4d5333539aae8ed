#pragma once
// Exact clique search on the support of a weighted graph (nonzero-weight
// edges only).

#include <vector>

#include "spectail/weighted_graph.hpp"

namespace spectail {

struct CliqueResult {
  int size = 0;
  std::vector<int> vertices;  // sorted
};

/// Maximum clique by branch and bound with greedy-colouring bounds, run on
/// each vertex's later neighbourhood in a degeneracy ordering. Exact.
/// The empty graph has clique number 0; any nonempty graph at least 1.
CliqueResult max_clique(const WeightedGraph& g);

inline int clique_number(const WeightedGraph& g) { return max_clique(g).size; }

/// Every clique of maximum size, each sorted, in lexicographic order.
/// Stops after `limit` cliques.
std::vector<std::vector<int>> all_maximum_cliques(const WeightedGraph& g, std::size_t limit = 100000);

/// Every maximal clique with at least `min_size` vertices (Bron-Kerbosch with
/// pivoting over a degeneracy ordering), each sorted, in lexicographic order.
std::vector<std::vector<int>> maximal_cliques(const WeightedGraph& g, int min_size);

/// Degeneracy (smallest-last) vertex ordering of the support.
std::vector<int> degeneracy_order(const WeightedGraph& g);

}  // namespace spectail
