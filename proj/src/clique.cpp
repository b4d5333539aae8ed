#include "spectail/clique.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace spectail {

namespace {

// Fixed-width bitset over the vertices of one local search problem.
class Bits {
 public:
  explicit Bits(int n = 0) : w_((n + 63) / 64, 0) {}
  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }
  bool none() const {
    return std::all_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x == 0; });
  }
  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }
  int first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return static_cast<int>(k * 64 + std::countr_zero(w_[k]));
    return -1;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }
  Bits& and_not(const Bits& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }

 private:
  std::vector<std::uint64_t> w_;
};

// Clique search restricted to a candidate vertex list of the parent graph.
class LocalSearch {
 public:
  LocalSearch(const WeightedGraph& g, const std::vector<int>& cand) : cand_(cand), adj_(cand.size(), Bits(cand.size())) {
    const int m = static_cast<int>(cand.size());
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        if (g.adjacent(cand[a], cand[b])) {
          adj_[a].set(b);
          adj_[b].set(a);
        }
  }

  int size() const { return static_cast<int>(cand_.size()); }

  Bits all() const {
    Bits b(size());
    for (int i = 0; i < size(); ++i) b.set(i);
    return b;
  }

  // Largest clique strictly bigger than `floor`; empty if none.
  std::vector<int> maximum(int floor) {
    best_ = floor;
    best_set_.clear();
    std::vector<int> r;
    expand_max(r, all());
    return best_set_;
  }

  // All cliques of exactly `target` vertices.
  void enumerate(int target, std::vector<std::vector<int>>& out, std::size_t limit) {
    std::vector<int> r;
    expand_enum(r, all(), target, out, limit);
  }

  int parent(int i) const { return cand_[i]; }

 private:
  // Greedy sequential colouring; returns vertices in colour order with the
  // colour count so far, the bound used for pruning.
  void colour(const Bits& p, std::vector<int>& order, std::vector<int>& bound) const {
    order.clear();
    bound.clear();
    Bits rest = p;
    int c = 0;
    while (!rest.none()) {
      ++c;
      Bits q = rest;
      while (!q.none()) {
        const int v = q.first();
        q.reset(v);
        q.and_not(adj_[v]);
        rest.reset(v);
        order.push_back(v);
        bound.push_back(c);
      }
    }
  }

  void expand_max(std::vector<int>& r, Bits p) {
    std::vector<int> order, bound;
    colour(p, order, bound);
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      if (static_cast<int>(r.size()) + bound[i] <= best_) return;
      const int v = order[i];
      r.push_back(v);
      Bits np = p & adj_[v];
      if (np.none()) {
        if (static_cast<int>(r.size()) > best_) {
          best_ = static_cast<int>(r.size());
          best_set_ = r;
        }
      } else {
        expand_max(r, np);
      }
      r.pop_back();
      p.reset(v);
    }
  }

  void expand_enum(std::vector<int>& r, Bits p, int target, std::vector<std::vector<int>>& out, std::size_t limit) {
    if (static_cast<int>(r.size()) == target) {
      if (out.size() < limit) {
        std::vector<int> c;
        for (int v : r) c.push_back(cand_[v]);
        out.push_back(std::move(c));
      }
      return;
    }
    std::vector<int> order, bound;
    colour(p, order, bound);
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      if (static_cast<int>(r.size()) + bound[i] < target || out.size() >= limit) return;
      const int v = order[i];
      r.push_back(v);
      expand_enum(r, p & adj_[v], target, out, limit);
      r.pop_back();
      p.reset(v);
    }
  }

  std::vector<int> cand_;
  std::vector<Bits> adj_;
  int best_ = 0;
  std::vector<int> best_set_;
};

// Neighbours of v that come after it in the ordering.
std::vector<int> later_neighbours(const WeightedGraph& g, const std::vector<int>& pos, int v) {
  std::vector<int> out;
  for (const int u : g.neighbors(v))
    if (pos[u] > pos[v]) out.push_back(u);
  return out;
}

std::vector<int> positions(const std::vector<int>& order) {
  std::vector<int> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  return pos;
}

}  // namespace

std::vector<int> degeneracy_order(const WeightedGraph& g) {
  const int n = g.num_vertices();
  int maxdeg = 0;
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    maxdeg = std::max(maxdeg, deg[v]);
  }
  // Bucket queue keyed by current degree.
  std::vector<std::vector<int>> buckets(maxdeg + 1);
  for (int v = n - 1; v >= 0; --v) buckets[deg[v]].push_back(v);
  std::vector<char> done(n, 0);
  std::vector<int> order;
  order.reserve(n);
  int d = 0;
  while (static_cast<int>(order.size()) < n) {
    d = std::max(0, d - 1);
    while (buckets[d].empty()) ++d;
    const int v = buckets[d].back();
    buckets[d].pop_back();
    if (done[v] || deg[v] != d) continue;
    done[v] = 1;
    order.push_back(v);
    for (const int u : g.neighbors(v)) {
      if (done[u]) continue;
      --deg[u];
      buckets[deg[u]].push_back(u);
    }
  }
  return order;
}

CliqueResult max_clique(const WeightedGraph& g) {
  CliqueResult res;
  const int n = g.num_vertices();
  if (n == 0) return res;
  res.size = 1;
  res.vertices = {0};
  const auto order = degeneracy_order(g);
  const auto pos = positions(order);
  for (int i = n - 1; i >= 0; --i) {
    const int v = order[i];
    const auto cand = later_neighbours(g, pos, v);
    if (static_cast<int>(cand.size()) + 1 <= res.size) continue;
    LocalSearch local(g, cand);
    const auto found = local.maximum(res.size - 1);
    if (!found.empty()) {
      res.vertices = {v};
      for (const int u : found) res.vertices.push_back(local.parent(u));
      res.size = static_cast<int>(res.vertices.size());
    }
  }
  std::sort(res.vertices.begin(), res.vertices.end());
  return res;
}

std::vector<std::vector<int>> all_maximum_cliques(const WeightedGraph& g, std::size_t limit) {
  std::vector<std::vector<int>> out;
  const int omega = max_clique(g).size;
  if (omega == 0) return out;
  if (omega == 1) {
    for (int v = 0; v < g.num_vertices() && out.size() < limit; ++v) out.push_back({v});
    return out;
  }
  const auto order = degeneracy_order(g);
  const auto pos = positions(order);
  for (const int v : order) {
    const auto cand = later_neighbours(g, pos, v);
    if (static_cast<int>(cand.size()) + 1 < omega) continue;
    LocalSearch local(g, cand);
    std::vector<std::vector<int>> found;
    local.enumerate(omega - 1, found, limit - out.size());
    for (auto& c : found) {
      c.push_back(v);
      std::sort(c.begin(), c.end());
      out.push_back(std::move(c));
    }
    if (out.size() >= limit) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void bron_kerbosch(const WeightedGraph& g, std::vector<int>& r, std::vector<int> p, std::vector<int> x, int min_size,
                   std::vector<std::vector<int>>& out) {
  if (p.empty()) {
    if (x.empty() && static_cast<int>(r.size()) >= min_size) {
      auto c = r;
      std::sort(c.begin(), c.end());
      out.push_back(std::move(c));
    }
    return;
  }
  if (static_cast<int>(r.size() + p.size()) < min_size) return;
  // Pivot maximizing |P ∩ N(u)|.
  int pivot = -1;
  std::size_t best = 0;
  auto count_in_p = [&](int u) {
    std::size_t c = 0;
    for (const int w : p) c += g.adjacent(u, w);
    return c;
  };
  for (const int u : p) {
    const auto c = count_in_p(u);
    if (pivot < 0 || c > best) {
      pivot = u;
      best = c;
    }
  }
  for (const int u : x) {
    const auto c = count_in_p(u);
    if (c > best) {
      pivot = u;
      best = c;
    }
  }
  const std::vector<int> branch = [&] {
    std::vector<int> b;
    for (const int v : p)
      if (!g.adjacent(pivot, v)) b.push_back(v);
    return b;
  }();
  for (const int v : branch) {
    std::vector<int> np, nx;
    for (const int w : p)
      if (g.adjacent(v, w)) np.push_back(w);
    for (const int w : x)
      if (g.adjacent(v, w)) nx.push_back(w);
    r.push_back(v);
    bron_kerbosch(g, r, std::move(np), std::move(nx), min_size, out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const WeightedGraph& g, int min_size) {
  std::vector<std::vector<int>> out;
  const auto order = degeneracy_order(g);
  const auto pos = positions(order);
  for (const int v : order) {
    if (g.degree(v) + 1 < min_size) {
      if (g.degree(v) == 0 && min_size <= 1) out.push_back({v});
      continue;
    }
    std::vector<int> p, x;
    for (const int u : g.neighbors(v)) (pos[u] > pos[v] ? p : x).push_back(u);
    std::vector<int> r{v};
    bron_kerbosch(g, r, std::move(p), std::move(x), min_size, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spectail
