#pragma once
// Analytic tail bounds and Monte Carlo estimators for
//   upper tail  P(lambda_1 >= sqrt(2(1+delta) log n))
//   lower tail  P(lambda_1 <= sqrt(2(1-delta) log n))
// of sparse Gaussian networks.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spectail/network_sampler.hpp"
#include "spectail/rng.hpp"

namespace spectail::tails {

enum class Method { naive, planted_lower_bound, union_upper_bound };

std::string method_name(Method m);

struct TailEstimate {
  Method method = Method::naive;
  int n = 0;
  double delta = 0.0;
  double probability = 0.0;
  double ci_low = 0.0;   // 95%
  double ci_high = 1.0;
  long long trials = 0;
  long long hits = 0;
};

struct ExponentFit {
  std::vector<int> n_grid;
  std::vector<double> log_probs;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_ci_low = 0.0;   // 95%
  double slope_ci_high = 0.0;
};

// ---------------------------------------------------------------------------
// Analytic bounds

struct GaussianTailBounds {
  double lower = 0.0;  // (1/sqrt(2 pi)) t/(t^2+1) e^{-t^2/2}
  double upper = 0.0;  // (1/sqrt(2 pi)) (1/t) e^{-t^2/2}
  double log_lower = 0.0;  // logs stay finite where the values underflow
  double log_upper = 0.0;
};

GaussianTailBounds gaussian_tail_bounds(double t);

struct MaxGaussianBounds {
  double level = 0.0;            // sqrt(2(1+delta) log n)
  double upper_event_lower = 0.0;  // P(max >= level) >= c'/(sqrt(log n) n^delta)
  double c_prime = 0.0;
  double lower_event_upper = 1.0;  // P(max <= sqrt(2(1-delta) log n)) <= exp(-m p)
};

/// m i.i.d. standard Gaussians with m >= c n.
MaxGaussianBounds max_gaussian_bounds(long long m, int n, double delta, double c);

/// Universal constant of the conditioned chi-square tail; see chi_tail_bound.
inline constexpr double kChiTailConstant = 1.4142135623730951;

/// Bound on P(Y_1^2 + ... + Y_m^2 >= L) for Y_i ~ N(0,1) conditioned on
/// |Y_i| > sqrt(eps log log n):
///   C^m e^{-L/2} e^{m/2} (L/m)^m e^{eps m log log n / 2},  clamped to 1.
/// C = sqrt(2) bounds the conditioned moment generating function
///   E exp(t Y^2) <= C e^{t tau^2} / (1 - 2t),  tau^2 = eps log log n,
/// uniformly in tau >= 0 and t in [0, 1/2), via the Mills-ratio inequalities
///   2/(x + sqrt(x^2+4)) <= P(N > x)/phi(x) <= 4/(3x + sqrt(x^2+8)).
double chi_tail_bound(int m, double L, double epsilon, int n);

/// Power form n^{-a/2 + eps b/2 + gamma} for m <= b log n / log log n + c and
/// L = a log n, clamped to 1.
double chi_tail_power_bound(double a, double b, double epsilon, double gamma, int n);

struct ComponentBoundParams {
  double c1 = 1.0, c2 = 1.0, c3 = 0.0;  // degree / size / excess caps
  double alpha = 1.0;
  double gamma = 0.0;
  double eta = 0.1;  // < 1/2
  double epsilon = 0.1;
  int k = 2;
  double theta() const;  // (2 eta^2 + 2 eta^4 c3)^{1/4}
  void validate() const;
};

struct ComponentTailBound {
  double first = 0.0;   // n^{-alpha/(2 theta^2) + eps c2/2 + gamma}
  double second = 0.0;  // n^{-k/(2(k-1)) (1-theta)^2 alpha + c1 eps/(2 eta^2) + gamma}
  double total = 0.0;   // clamped to [0, 1]
  double theta = 0.0;
};

ComponentTailBound component_tail_bound(const ComponentBoundParams& p, int n);

struct SubgraphBound {
  double value = 0.0;     // (k/n)^l (d_eff e^2 / 1)^{k+l}: always valid
  double min_form = 0.0;  // min((k/n)^l, base^{k+l}); valid only when base <= 1
  double base = 0.0;      // d_eff e^2, d_eff = n q (exact retention)
  double base_analytic = 0.0;  // d' e^2 / (log n)^{eps/2}
};

/// Expected number of subgraphs of the thinned support X^(1) with k vertices
/// and k + l edges; needs 0 <= l <= C(k,2) - k.
SubgraphBound expected_subgraph_bound(int n, int k, int l, double epsilon, double d);

/// Exact E N_{k,l} = C(n,k) * #{graphs on k labelled vertices, k+l edges} * q^{k+l}.
double expected_subgraph_count(int n, int k, int l, double q);

/// Analytic exponent (in n) of the planted lower bound with a k-clique:
///   k = 2: -delta (single large value)
///   k >= 3: -(C(k,2) - k) - C(k,2)(1+delta)/(k-1)^2
double planted_exponent(int k, double delta);

/// k in [2, k_max] maximizing planted_exponent, ties within 1e-12 relative.
std::vector<int> planted_argmax(double delta, int k_max);

// ---------------------------------------------------------------------------
// Monte Carlo

struct McConfig {
  std::uint64_t seed = 1;
  int threads = 1;
  int block = 256;  // trials per RNG child stream
};

/// Counts trials where `trial(rng)` is true. Trials are grouped in fixed
/// blocks, each with its own child stream, so the count does not depend on
/// the thread count.
long long count_hits(long long trials, const McConfig& cfg, const std::function<bool(Rng&)>& trial);

/// lambda_1(g) >= level, deciding with cheap per-component bounds first.
bool top_eigenvalue_at_least(const WeightedGraph& g, double level);

/// lambda_1(g) <= level.
bool top_eigenvalue_at_most(const WeightedGraph& g, double level);

TailEstimate estimate_from_hits(Method m, int n, double delta, long long hits, long long trials);

TailEstimate upper_tail_naive(const sampler::ModelParams& params, double delta, long long trials, const McConfig& cfg);

/// Adds trials in deterministic rounds until `min_hits` is reached or
/// `max_trials` is spent.
TailEstimate upper_tail_naive_adaptive(const sampler::ModelParams& params, double delta, long long min_hits,
                                       long long initial_trials, long long max_trials, const McConfig& cfg);

/// Certified product lower bound. k = 2: E_X[1 - (1 - p_lo(level))^{|E(X)|}].
/// k >= 3: P(X contains a k-clique) * p_lo(level/(k-1))^{C(k,2)}, with
/// p_lo the Gaussian-tail lower bound; the interval carries the Monte Carlo
/// uncertainty of the graph factor.
TailEstimate upper_tail_planted_lower(const sampler::ModelParams& params, double delta, int k, long long trials,
                                      const McConfig& cfg);

/// First-moment bound conditional on the support, averaged over samples:
/// sum over components of the smallest of the exact single-edge tail, the
/// matrix Gaussian series bound |C| exp(-t^2 / (2 maxdeg)), and the chi-square
/// tail implied by the clique spectral bound; clamped at 1 per sample.
TailEstimate upper_tail_union_bound(const sampler::ModelParams& params, double delta, long long trials,
                                    const McConfig& cfg);

/// Per-support conditional bound used by upper_tail_union_bound.
double union_bound_given_support(const WeightedGraph& g, double level);

TailEstimate lower_tail_mc(const sampler::ModelParams& params, double delta, long long trials, const McConfig& cfg);

/// Least-squares slope of log P against log n; rejects zero probabilities
/// and fewer than three points.
ExponentFit fit_exponent(const std::vector<std::pair<int, double>>& samples);

struct CliqueScaling {
  std::vector<TailEstimate> per_n;  // probability of containing a k-clique
  ExponentFit fit;                  // empty slope when a point has no hits
  bool fitted = false;
  double predicted_slope = 0.0;     // -(C(k,2) - k)
};

CliqueScaling clique_existence_scaling(const std::vector<int>& n_grid, int k, double d, long long trials,
                                       const McConfig& cfg);

}  // namespace spectail::tails
