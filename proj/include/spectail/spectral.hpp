#pragma once
// Largest eigenvalue of the conductance matrix and the clique spectral bound
//   lambda_1^2 <= ((k-1)/k) ||A||_F^2,   k = clique number of the support.

#include <span>
#include <vector>

#include "spectail/weighted_graph.hpp"

namespace spectail {

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, length n
  double residual = 0.0;       // ||A v - value v||_2
};

struct EigenOptions {
  double rel_tol = 1e-10;   // target ||Av - lv|| / max(1, |l|)
  int dense_cutoff = 32;    // components up to this size go to Jacobi
  int krylov_dim = 64;      // Lanczos basis size per restart
  int max_restarts = 400;
};

/// Top eigenpair of a symmetric matrix stored dense row-major (n x n), by
/// cyclic Jacobi rotations.
EigenPair dense_top_eigenpair(std::span<const double> a, int n);

/// Top eigenpair of a connected graph by explicitly restarted Lanczos with full
/// reorthogonalization. Throws ConvergenceError after max_restarts.
EigenPair lanczos_top_eigenpair(const WeightedGraph& g, const EigenOptions& opt);

/// lambda_1 of g and a unit eigenvector, computed per connected component
/// (lambda_1 of g is the largest component value). Isolated vertices count as
/// 1x1 zero components, so lambda_1 >= 0; the empty graph yields value 0 and
/// an empty vector.
EigenPair largest_eigenvalue(const WeightedGraph& g, const EigenOptions& opt = {});

inline EigenPair largest_eigenvalue(const WeightedGraph& g, double rel_tol) {
  EigenOptions opt;
  opt.rel_tol = rel_tol;
  return largest_eigenvalue(g, opt);
}

/// ||A||_F^2 = 2 sum_{i<j} a_ij^2.
double frobenius_sq(const WeightedGraph& g);

/// Exact test of lambda_1(g) < t: t I - A is positive definite iff every
/// pivot of its LDL^T factorization is positive. Vertices of degree <= 2 are
/// eliminated first (no growth in fill), the remaining core densely.
bool top_eigenvalue_below(const WeightedGraph& g, double t);

/// ((k-1)/k) ||A||_F^2 - lambda_1^2; 0 for graphs without edges.
double spectral_bound_gap(const WeightedGraph& g);

struct SpectralSummary {
  double lambda1 = 0.0;
  double frob_sq = 0.0;
  int clique_number = 0;
  std::vector<int> clique_vertices;
  std::vector<double> top_eigenvector;
  double residual = 0.0;
};

/// Eigenpair, Frobenius norm and an exact maximum clique. Throws
/// InvariantError if the clique spectral bound fails beyond 1e-9 ||A||_F^2.
SpectralSummary summarize(const WeightedGraph& g, const EigenOptions& opt = {});

}  // namespace spectail
