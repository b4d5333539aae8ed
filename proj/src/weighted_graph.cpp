#include "spectail/weighted_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "spectail/errors.hpp"

namespace spectail {

WeightedGraph::WeightedGraph(int n) : WeightedGraph(n, {}) {}

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : WeightedGraph(n, std::move(edges), {}) {}

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges, std::vector<int> labels)
    : n_(n), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (n < 0) throw DomainError("vertex count must be nonnegative");
  if (labels_.empty()) {
    labels_.resize(n);
    std::iota(labels_.begin(), labels_.end(), 0);
  } else if (static_cast<int>(labels_.size()) != n) {
    throw DomainError("label vector size does not match vertex count");
  }
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n) {
      throw DomainError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") out of range");
    }
    if (e.u == e.v) throw DomainError("self loop at vertex " + std::to_string(e.u));
    if (!std::isfinite(e.w)) throw DomainError("non-finite edge weight");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw DomainError("duplicate edge (" + std::to_string(edges_[i].u) + ", " + std::to_string(edges_[i].v) + ")");
    }
  }
  build();
}

void WeightedGraph::build() {
  std::vector<std::int32_t> deg(n_, 0);
  for (const auto& e : edges_) {
    if (e.w == 0.0) continue;
    ++deg[e.u];
    ++deg[e.v];
  }
  row_ptr_.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) row_ptr_[i + 1] = row_ptr_[i] + deg[i];
  col_.assign(row_ptr_[n_], 0);
  val_.assign(row_ptr_[n_], 0.0);
  std::vector<std::int32_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  // Edges are sorted by (u, v). Lower neighbours go in first, then upper
  // ones, so every row comes out sorted.
  for (const auto& e : edges_) {
    if (e.w == 0.0) continue;
    col_[fill[e.v]] = e.u;
    val_[fill[e.v]++] = e.w;
  }
  for (const auto& e : edges_) {
    if (e.w == 0.0) continue;
    col_[fill[e.u]] = e.v;
    val_[fill[e.u]++] = e.w;
  }
}

std::span<const std::int32_t> WeightedGraph::neighbors(int v) const {
  return std::span<const std::int32_t>(col_).subspan(row_ptr_[v], degree(v));
}

std::span<const double> WeightedGraph::neighbor_weights(int v) const {
  return std::span<const double>(val_).subspan(row_ptr_[v], degree(v));
}

bool WeightedGraph::adjacent(int a, int b) const {
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

double WeightedGraph::weight(int a, int b) const {
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return 0.0;
  return val_[row_ptr_[a] + (it - nb.begin())];
}

WeightedGraph WeightedGraph::induced(std::span<const int> vertices) const {
  std::vector<int> local(n_, -1);
  std::vector<int> labels;
  labels.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    local[vertices[i]] = static_cast<int>(i);
    labels.push_back(labels_[vertices[i]]);
  }
  std::vector<Edge> sub;
  for (const int v : vertices) {
    auto nb = neighbors(v);
    auto wt = neighbor_weights(v);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const int u = nb[p];
      if (local[u] >= 0 && local[v] < local[u]) sub.push_back({local[v], local[u], wt[p]});
    }
  }
  return WeightedGraph(static_cast<int>(vertices.size()), std::move(sub), std::move(labels));
}

std::vector<double> WeightedGraph::dense() const {
  std::vector<double> a(static_cast<std::size_t>(n_) * n_, 0.0);
  for (const auto& e : edges_) {
    a[static_cast<std::size_t>(e.u) * n_ + e.v] = e.w;
    a[static_cast<std::size_t>(e.v) * n_ + e.u] = e.w;
  }
  return a;
}

WeightedGraph complete_graph(int k, double w) {
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) edges.push_back({i, j, w});
  return WeightedGraph(k, std::move(edges));
}

}  // namespace spectail
