#include "spectail/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "spectail/clique.hpp"
#include "spectail/errors.hpp"
#include "spectail/graph_algorithms.hpp"
#include "spectail/kernels.hpp"

namespace spectail {

namespace {

// Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts), the
// classic tql2 routine. d: diagonal (in) / eigenvalues (out, ascending),
// e: subdiagonal in e[1..n-1], z: n x n row-major, eigenvectors in columns.
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw ConvergenceError("tridiagonal QL did not converge", std::abs(e[l]));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            double& zk1 = z[static_cast<std::size_t>(k) * n + i + 1];
            double& zk = z[static_cast<std::size_t>(k) * n + i];
            h = zk1;
            zk1 = s * zk + c * h;
            zk = c * zk - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Sign convention: the entry of largest magnitude is positive.
void canonical_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (!v.empty() && v[best] < 0.0)
    for (auto& x : v) x = -x;
}

double residual_norm(const WeightedGraph& g, std::span<const double> v, double value) {
  std::vector<double> av(v.size());
  kernels::csr_matvec(g.csr(), v, av);
  kernels::axpy(-value, v, av);
  return kernels::norm2(av);
}

// Deterministic, well-spread start vector.
std::vector<double> start_vector(int n) {
  std::vector<double> v(n);
  std::uint64_t s = 0x243f6a8885a308d3ULL;
  for (int i = 0; i < n; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    v[i] = 0.5 + static_cast<double>(s >> 11) * 0x1.0p-53;
  }
  kernels::scale(1.0 / kernels::norm2(v), v);
  return v;
}

}  // namespace

EigenPair dense_top_eigenpair(std::span<const double> a_in, int n) {
  EigenPair out;
  if (n == 0) return out;
  std::vector<double> a(a_in.begin(), a_in.end());
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto at = [n](std::vector<double>& m, int r, int c) -> double& { return m[static_cast<std::size_t>(r) * n + c]; };

  double total = 0.0;
  for (double x : a) total += x * x;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
    if (off <= 1e-32 * std::max(total, 1e-300)) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (apq == 0.0) continue;
        const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(a, k, p);
          const double akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(a, p, k);
          const double aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = at(v, k, p);
          const double vkq = at(v, k, q);
          at(v, k, p) = c * vkp - s * vkq;
          at(v, k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  int top = 0;
  for (int i = 1; i < n; ++i)
    if (at(a, i, i) > at(a, top, top)) top = i;
  out.value = at(a, top, top);
  out.vector.resize(n);
  for (int k = 0; k < n; ++k) out.vector[k] = at(v, k, top);
  kernels::scale(1.0 / kernels::norm2(out.vector), out.vector);
  canonical_sign(out.vector);
  return out;
}

EigenPair lanczos_top_eigenpair(const WeightedGraph& g, const EigenOptions& opt) {
  const int n = g.num_vertices();
  const auto csr = g.csr();
  const int m_max = std::max(2, std::min(opt.krylov_dim, n));
  std::vector<std::vector<double>> basis(m_max + 1, std::vector<double>(n));
  std::vector<double> w(n);
  std::vector<double> alpha(m_max), beta(m_max);
  std::vector<double> x = start_vector(n);
  double last_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    basis[0] = x;
    int m = m_max;
    double scale = 0.0;
    for (int j = 0; j < m_max; ++j) {
      kernels::csr_matvec(csr, basis[j], w);
      alpha[j] = kernels::dot(w, basis[j]);
      kernels::axpy(-alpha[j], basis[j], w);
      if (j > 0) kernels::axpy(-beta[j - 1], basis[j - 1], w);
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) kernels::axpy(-kernels::dot(w, basis[i]), basis[i], w);
      }
      beta[j] = kernels::norm2(w);
      scale = std::max({scale, std::abs(alpha[j]), beta[j]});
      if (beta[j] <= 1e-13 * std::max(scale, 1e-300)) {
        m = j + 1;  // invariant subspace
        beta[j] = 0.0;
        break;
      }
      if (j + 1 < m_max) {
        basis[j + 1] = w;
        kernels::scale(1.0 / beta[j], basis[j + 1]);
      }
    }

    std::vector<double> d(alpha.begin(), alpha.begin() + m);
    std::vector<double> e(m, 0.0);
    for (int i = 1; i < m; ++i) e[i] = beta[i - 1];
    std::vector<double> z(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(i) * m + i] = 1.0;
    tql2(d, e, z, m);
    int top = 0;
    for (int i = 1; i < m; ++i)
      if (d[i] > d[top]) top = i;
    const double theta = d[top];

    std::fill(x.begin(), x.end(), 0.0);
    for (int i = 0; i < m; ++i) kernels::axpy(z[static_cast<std::size_t>(i) * m + top], basis[i], x);
    kernels::scale(1.0 / kernels::norm2(x), x);

    const double res = residual_norm(g, x, theta);
    last_residual = res;
    if (res <= opt.rel_tol * std::max(1.0, std::abs(theta))) {
      EigenPair out;
      out.value = theta;
      out.vector = std::move(x);
      canonical_sign(out.vector);
      out.residual = res;
      return out;
    }
  }
  throw ConvergenceError("Lanczos did not converge after " + std::to_string(opt.max_restarts) +
                             " restarts (last residual " + std::to_string(last_residual) + ")",
                         last_residual);
}

EigenPair largest_eigenvalue(const WeightedGraph& g, const EigenOptions& opt) {
  if (!(opt.rel_tol > 0.0 && opt.rel_tol <= 1e-3)) throw DomainError("rel_tol must lie in (0, 1e-3]");
  const int n = g.num_vertices();
  EigenPair best;
  if (n == 0) return best;

  int best_component = -1;
  std::vector<int> best_vertices;
  const auto comps = component_vertex_sets(g);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& vs = comps[c];
    EigenPair ep;
    if (vs.size() == 1) {
      ep.value = 0.0;
      ep.vector = {1.0};
    } else {
      const auto sub = g.induced(vs);
      if (vs.size() == 2) {
        const double w = sub.weight(0, 1);
        ep.value = std::abs(w);
        ep.vector = {M_SQRT1_2, w < 0 ? -M_SQRT1_2 : M_SQRT1_2};
      } else if (static_cast<int>(vs.size()) <= opt.dense_cutoff) {
        const auto dense = sub.dense();
        ep = dense_top_eigenpair(dense, sub.num_vertices());
      } else {
        ep = lanczos_top_eigenpair(sub, opt);
      }
    }
    if (best_component < 0 || ep.value > best.value) {
      best_component = static_cast<int>(c);
      best = std::move(ep);
      best_vertices = vs;
    }
  }

  std::vector<double> full(n, 0.0);
  for (std::size_t i = 0; i < best_vertices.size(); ++i) full[best_vertices[i]] = best.vector[i];
  best.vector = std::move(full);
  best.residual = residual_norm(g, best.vector, best.value);
  return best;
}

double frobenius_sq(const WeightedGraph& g) {
  double s = 0.0;
  for (const auto& e : g.edges()) s += e.w * e.w;
  return 2.0 * s;
}

double spectral_bound_gap(const WeightedGraph& g) {
  const double frob = frobenius_sq(g);
  if (frob == 0.0) return 0.0;
  const int k = clique_number(g);
  const double lambda = largest_eigenvalue(g).value;
  return (k - 1.0) / k * frob - lambda * lambda;
}

bool top_eigenvalue_below(const WeightedGraph& g, double t) {
  const int n = g.num_vertices();
  if (g.num_edges() == 0 || n == 0) return t > 0.0;
  if (!(t > 0.0)) return false;  // trace 0 forces lambda_1 >= 0, and > 0 with any edge

  // Off-diagonal entries of M = t I - A.
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (int v = 0; v < n; ++v) {
    const auto nb = g.neighbors(v);
    const auto w = g.neighbor_weights(v);
    adj[v].reserve(nb.size());
    for (std::size_t i = 0; i < nb.size(); ++i) adj[v].emplace_back(nb[i], -w[i]);
  }
  std::vector<double> diag(n, t);
  std::vector<char> gone(n, 0);
  auto entry = [&](int a, int b) -> double* {
    for (auto& [c, m] : adj[a])
      if (c == b) return &m;
    return nullptr;
  };
  auto drop = [&](int a, int b) {
    auto& list = adj[a];
    for (std::size_t i = 0; i < list.size(); ++i)
      if (list[i].first == b) {
        list[i] = list.back();
        list.pop_back();
        return;
      }
  };

  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (adj[v].size() <= 2) queue.push_back(v);
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    if (gone[v] || adj[v].size() > 2) continue;
    const double p = diag[v];
    if (!(p > 0.0)) return false;
    gone[v] = 1;
    const auto nb = adj[v];
    for (const auto& [a, m] : nb) {
      diag[a] -= m * m / p;
      drop(a, v);
    }
    if (nb.size() == 2) {
      const auto [a, ma] = nb[0];
      const auto [b, mb] = nb[1];
      const double fill = -ma * mb / p;
      if (double* e = entry(a, b)) {
        *e += fill;
        *entry(b, a) += fill;
      } else {
        adj[a].emplace_back(b, fill);
        adj[b].emplace_back(a, fill);
      }
    }
    for (const auto& [a, m] : nb)
      if (adj[a].size() <= 2) queue.push_back(a);
  }

  std::vector<int> core;
  std::vector<int> slot(n, -1);
  for (int v = 0; v < n; ++v)
    if (!gone[v]) {
      slot[v] = static_cast<int>(core.size());
      core.push_back(v);
    }
  const auto c = core.size();
  if (c == 0) return true;
  std::vector<double> m(c * c, 0.0);
  for (std::size_t i = 0; i < c; ++i) {
    m[i * c + i] = diag[core[i]];
    for (const auto& [b, x] : adj[core[i]]) m[i * c + slot[b]] = x;
  }
  // Cholesky, lower triangle.
  for (std::size_t j = 0; j < c; ++j) {
    double d = m[j * c + j];
    for (std::size_t k = 0; k < j; ++k) d -= m[j * c + k] * m[j * c + k];
    if (!(d > 0.0)) return false;
    const double l = std::sqrt(d);
    m[j * c + j] = l;
    for (std::size_t i = j + 1; i < c; ++i) {
      double s = m[i * c + j];
      for (std::size_t k = 0; k < j; ++k) s -= m[i * c + k] * m[j * c + k];
      m[i * c + j] = s / l;
    }
  }
  return true;
}

SpectralSummary summarize(const WeightedGraph& g, const EigenOptions& opt) {
  SpectralSummary s;
  auto ep = largest_eigenvalue(g, opt);
  s.lambda1 = ep.value;
  s.top_eigenvector = std::move(ep.vector);
  s.residual = ep.residual;
  s.frob_sq = frobenius_sq(g);
  auto clique = max_clique(g);
  s.clique_number = clique.size;
  s.clique_vertices = std::move(clique.vertices);
  if (s.clique_number >= 2) {
    const double bound = (s.clique_number - 1.0) / s.clique_number * s.frob_sq;
    if (s.lambda1 * s.lambda1 > bound + 1e-9 * s.frob_sq) {
      throw InvariantError("clique spectral bound violated: lambda1^2 = " + std::to_string(s.lambda1 * s.lambda1) +
                           " > " + std::to_string(bound));
    }
  }
  return s;
}

}  // namespace spectail
