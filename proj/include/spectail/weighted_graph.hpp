#pragma once
// Undirected network with real edge conductances. The implied matrix A is
// symmetric with zero diagonal; a_ij is the weight of edge {i, j} and 0 when
// the pair is not an edge.

#include <cstdint>
#include <span>
#include <vector>

#include "spectail/kernels.hpp"

namespace spectail {

struct Edge {
  int u = 0;  // u < v after construction
  int v = 0;
  double w = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int n);

  /// Endpoints may come in either order. Throws DomainError on self loops,
  /// out-of-range endpoints, duplicate pairs or non-finite weights.
  WeightedGraph(int n, std::vector<Edge> edges);

  /// Same, for a subgraph whose vertex i stands for `labels[i]` in a parent.
  WeightedGraph(int n, std::vector<Edge> edges, std::vector<int> labels);

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  /// Original vertex ids (identity for graphs not produced as subgraphs).
  std::span<const int> labels() const { return labels_; }

  // Support adjacency: edges with nonzero weight only, neighbours sorted.
  std::span<const std::int32_t> neighbors(int v) const;
  std::span<const double> neighbor_weights(int v) const;
  int degree(int v) const { return row_ptr_[v + 1] - row_ptr_[v]; }
  bool adjacent(int a, int b) const;

  /// a_ij, 0 for non-edges and for i == j.
  double weight(int a, int b) const;

  kernels::CsrView csr() const { return {row_ptr_, col_, val_}; }

  /// Induced subgraph on `vertices` (in that order); labels are carried over.
  WeightedGraph induced(std::span<const int> vertices) const;

  /// Dense row-major copy of A.
  std::vector<double> dense() const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.labels_ == b.labels_;
  }

 private:
  void build();

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> labels_;
  std::vector<std::int32_t> row_ptr_{0};
  std::vector<std::int32_t> col_;
  std::vector<double> val_;
};

/// Complete graph on k vertices with every weight equal to `w`.
WeightedGraph complete_graph(int k, double w = 1.0);

}  // namespace spectail
