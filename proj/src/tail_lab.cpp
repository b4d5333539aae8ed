#include "spectail/tail_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/binomial.hpp>

#include "spectail/clique.hpp"
#include "spectail/errors.hpp"
#include "spectail/graph_algorithms.hpp"
#include "spectail/parallel.hpp"
#include "spectail/rate_theory.hpp"
#include "spectail/spectral.hpp"
#include "spectail/stats.hpp"

namespace spectail::tails {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double log_binomial(double n, double k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Mean and 95% normal-approximation interval of per-sample values in [0, 1].
TailEstimate estimate_from_values(Method m, int n, double delta, const std::vector<double>& values) {
  TailEstimate est;
  est.method = m;
  est.n = n;
  est.delta = delta;
  est.trials = static_cast<long long>(values.size());
  double sum = 0.0, sum_sq = 0.0;
  for (const double v : values) {
    sum += v;
    sum_sq += v * v;
    est.hits += v > 0.0;
  }
  const double cnt = static_cast<double>(values.size());
  est.probability = sum / cnt;
  const double var = cnt > 1 ? std::max(0.0, (sum_sq - cnt * est.probability * est.probability) / (cnt - 1.0)) : 0.0;
  const double half = 1.959963984540054 * std::sqrt(var / cnt);
  est.ci_low = clamp01(est.probability - half);
  est.ci_high = clamp01(est.probability + half);
  return est;
}

void require_trials(long long trials) {
  if (trials < 1) throw DomainError("trials must be at least 1");
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::naive:
      return "naive";
    case Method::planted_lower_bound:
      return "planted-lower-bound";
    case Method::union_upper_bound:
      return "union-upper-bound";
  }
  return "unknown";
}

GaussianTailBounds gaussian_tail_bounds(double t) {
  if (!(t > 0.0)) throw DomainError("gaussian_tail_bounds needs t > 0");
  const double log_core = std::log(kInvSqrt2Pi) - 0.5 * t * t;
  GaussianTailBounds b;
  b.log_lower = log_core + std::log(t / (t * t + 1.0));
  b.log_upper = log_core - std::log(t);
  b.lower = std::exp(b.log_lower);
  b.upper = std::exp(b.log_upper);
  return b;
}

MaxGaussianBounds max_gaussian_bounds(long long m, int n, double delta, double c) {
  if (n < 2) throw DomainError("n must be at least 2");
  if (!(c > 0.0)) throw DomainError("c must be positive");
  if (static_cast<double>(m) < c * n) throw DomainError("max_gaussian_bounds needs m >= c n");
  if (delta < 0.0) throw DomainError("delta must be nonnegative");
  MaxGaussianBounds b;
  const double logn = std::log(static_cast<double>(n));
  b.level = sampler::upper_level(n, delta);
  const double p_lo = gaussian_tail_bounds(b.level).lower;
  // 1 - (1 - p)^m, the exact Bernoulli expansion of the maximum.
  b.upper_event_lower = -std::expm1(static_cast<double>(m) * std::log1p(-p_lo));
  b.c_prime = b.upper_event_lower * std::sqrt(logn) * std::pow(static_cast<double>(n), delta);
  const double low_level = sampler::lower_level(n, delta);
  if (low_level > 0.0) {
    const double p = gaussian_tail_bounds(low_level).lower;
    b.lower_event_upper = std::exp(-static_cast<double>(m) * p);
  }
  return b;
}

double chi_tail_bound(int m, double L, double epsilon, int n) {
  if (m < 1) throw DomainError("chi_tail_bound needs m >= 1");
  if (!(L > m)) throw DomainError("chi_tail_bound needs L > m");
  if (n < 16) throw DomainError("chi_tail_bound needs n >= 16");
  if (epsilon < 0.0) throw DomainError("epsilon must be nonnegative");
  const double md = m;
  const double loglog = std::log(std::log(static_cast<double>(n)));
  const double log_bound = md * std::log(kChiTailConstant) - 0.5 * L + 0.5 * md + md * std::log(L / md) +
                           0.5 * epsilon * md * loglog;
  return log_bound >= 0.0 ? 1.0 : std::exp(log_bound);
}

double chi_tail_power_bound(double a, double b, double epsilon, double gamma, int n) {
  if (!(a > 0.0 && b > 0.0 && gamma > 0.0)) throw DomainError("chi_tail_power_bound needs a, b, gamma > 0");
  const double e = -a / 2.0 + epsilon * b / 2.0 + gamma;
  return clamp01(std::pow(static_cast<double>(n), e));
}

double ComponentBoundParams::theta() const { return std::pow(2.0 * eta * eta + 2.0 * std::pow(eta, 4) * c3, 0.25); }

void ComponentBoundParams::validate() const {
  if (c1 < 0 || c2 < 0 || c3 < 0) throw DomainError("c1, c2, c3 must be nonnegative");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (gamma < 0.0) throw DomainError("gamma must be nonnegative");
  if (!(eta > 0.0 && eta < 0.5)) throw DomainError("eta must lie in (0, 1/2)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (k < 2) throw DomainError("k must be at least 2");
  const double th = theta();
  if (!(th > 0.0 && th < 1.0)) throw DomainError("theta = (2 eta^2 + 2 eta^4 c3)^{1/4} must lie in (0, 1)");
}

ComponentTailBound component_tail_bound(const ComponentBoundParams& p, int n) {
  p.validate();
  ComponentTailBound b;
  b.theta = p.theta();
  const double nn = static_cast<double>(n);
  const double kk = p.k;
  const double e1 = -p.alpha / (2.0 * b.theta * b.theta) + p.epsilon * p.c2 / 2.0 + p.gamma;
  const double e2 = -kk / (2.0 * (kk - 1.0)) * (1.0 - b.theta) * (1.0 - b.theta) * p.alpha +
                    p.c1 * p.epsilon / (2.0 * p.eta * p.eta) + p.gamma;
  b.first = std::pow(nn, e1);
  b.second = std::pow(nn, e2);
  b.total = clamp01(b.first + b.second);
  return b;
}

double expected_subgraph_count(int n, int k, int l, double q) {
  const int pairs = k * (k - 1) / 2;
  const int e = k + l;
  if (e < 0 || e > pairs) return 0.0;
  return std::exp(log_binomial(n, k) + log_binomial(pairs, e) + e * std::log(q));
}

SubgraphBound expected_subgraph_bound(int n, int k, int l, double epsilon, double d) {
  if (k < 3 || k > n) throw DomainError("expected_subgraph_bound needs 3 <= k <= n");
  if (l < 0 || l > k * (k - 1) / 2 - k) throw DomainError("expected_subgraph_bound needs 0 <= l <= C(k,2) - k");
  const auto plan = sampler::make_plan(n, d, epsilon, 1e-9);
  SubgraphBound b;
  const double e2 = std::exp(2.0);
  b.base = plan.q_exact * n * e2;
  b.base_analytic = plan.q_bound * n * e2;
  const double ratio = static_cast<double>(k) / n;
  b.value = std::pow(ratio, l) * std::pow(b.base, k + l);
  b.min_form = std::min(std::pow(ratio, l), std::pow(b.base, k + l));
  return b;
}

double planted_exponent(int k, double delta) {
  if (k < 2) throw DomainError("planted_exponent needs k >= 2");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (k == 2) return -delta;
  const double kk = k;
  const double edges = kk * (kk - 1.0) / 2.0;
  const double clique_count_exponent = -(edges - kk);                 // expected number of k-cliques
  const double weight_exponent = -edges * (1.0 + delta) / ((kk - 1.0) * (kk - 1.0));  // all weights >= level/(k-1)
  return clique_count_exponent + weight_exponent;
}

std::vector<int> planted_argmax(double delta, int k_max) {
  if (k_max < 2) throw DomainError("k_max must be at least 2");
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 2; k <= k_max; ++k) best = std::max(best, planted_exponent(k, delta));
  std::vector<int> out;
  for (int k = 2; k <= k_max; ++k)
    if (std::abs(planted_exponent(k, delta) - best) <= 1e-12 * std::max(1.0, std::abs(best))) out.push_back(k);
  return out;
}

long long count_hits(long long trials, const McConfig& cfg, const std::function<bool(Rng&)>& trial) {
  require_trials(trials);
  const long long block = std::max(1, cfg.block);
  const auto blocks = static_cast<std::size_t>((trials + block - 1) / block);
  const auto counts = parallel_map(blocks, cfg.threads, [&](std::size_t b) {
    Rng rng = make_rng(child_seed(cfg.seed, b));
    const long long begin = static_cast<long long>(b) * block;
    const long long end = std::min(trials, begin + block);
    long long hits = 0;
    for (long long t = begin; t < end; ++t) hits += trial(rng);
    return hits;
  });
  long long total = 0;
  for (const auto c : counts) total += c;
  return total;
}

static double max_abs_weight(const WeightedGraph& g) {
  double m = 0.0;
  for (const auto& e : g.edges()) m = std::max(m, std::abs(e.w));
  return m;
}

bool top_eigenvalue_at_least(const WeightedGraph& g, double level) {
  if (max_abs_weight(g) >= level) return true;  // lambda_1 >= |w_ij| via e_i +- e_j
  return !top_eigenvalue_below(g, level);
}

bool top_eigenvalue_at_most(const WeightedGraph& g, double level) {
  if (max_abs_weight(g) > level) return false;
  return top_eigenvalue_below(g, level);
}

TailEstimate estimate_from_hits(Method m, int n, double delta, long long hits, long long trials) {
  TailEstimate est;
  est.method = m;
  est.n = n;
  est.delta = delta;
  est.trials = trials;
  est.hits = hits;
  est.probability = static_cast<double>(hits) / static_cast<double>(trials);
  const auto iv = stats::clopper_pearson(hits, trials);
  est.ci_low = iv.low;
  est.ci_high = iv.high;
  return est;
}

TailEstimate upper_tail_naive(const sampler::ModelParams& params, double delta, long long trials, const McConfig& cfg) {
  params.validate();
  require_trials(trials);
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double level = sampler::upper_level(params.n, delta);
  const long long hits = count_hits(trials, cfg, [&](Rng& rng) {
    return top_eigenvalue_at_least(sampler::sample_network(params, rng), level);
  });
  return estimate_from_hits(Method::naive, params.n, delta, hits, trials);
}

TailEstimate upper_tail_naive_adaptive(const sampler::ModelParams& params, double delta, long long min_hits,
                                       long long initial_trials, long long max_trials, const McConfig& cfg) {
  require_trials(initial_trials);
  if (max_trials < initial_trials) throw DomainError("max_trials must be >= initial_trials");
  long long trials = initial_trials;
  for (;;) {
    // Trial t always uses the same stream position, so growing the run only
    // appends trials; results equal a single run of the final size.
    auto est = upper_tail_naive(params, delta, trials, cfg);
    if (est.hits >= min_hits || trials >= max_trials) return est;
    const double rate = std::max(static_cast<double>(est.hits), 1.0) / static_cast<double>(trials);
    long long next = static_cast<long long>(std::ceil(1.25 * static_cast<double>(min_hits) / rate));
    const long long block = std::max(1, cfg.block);
    next = std::max(next, 2 * trials);
    next = (next + block - 1) / block * block;
    trials = std::min(next, max_trials);
  }
}

TailEstimate upper_tail_planted_lower(const sampler::ModelParams& params, double delta, int k, long long trials,
                                      const McConfig& cfg) {
  params.validate();
  require_trials(trials);
  if (k < 2) throw DomainError("planted lower bound needs k >= 2");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double level = sampler::upper_level(params.n, delta);
  if (k == 2) {
    const double p_lo = gaussian_tail_bounds(level).lower;
    const long long block = std::max(1, cfg.block);
    const auto blocks = static_cast<std::size_t>((trials + block - 1) / block);
    const auto chunks = parallel_map(blocks, cfg.threads, [&](std::size_t b) {
      Rng rng = make_rng(child_seed(cfg.seed, b));
      std::vector<double> vals;
      const long long begin = static_cast<long long>(b) * block;
      for (long long t = begin; t < std::min(trials, begin + block); ++t) {
        const auto g = sampler::sample_network(params, rng);
        vals.push_back(-std::expm1(static_cast<double>(g.num_edges()) * std::log1p(-p_lo)));
      }
      return vals;
    });
    std::vector<double> values;
    for (const auto& c : chunks) values.insert(values.end(), c.begin(), c.end());
    return estimate_from_values(Method::planted_lower_bound, params.n, delta, values);
  }
  const long long hits = count_hits(trials, cfg, [&](Rng& rng) {
    return max_clique(sampler::sample_network(params, rng)).size >= k;
  });
  const double edges = k * (k - 1) / 2.0;
  const double weight_factor = std::pow(gaussian_tail_bounds(level / (k - 1)).lower, edges);
  auto est = estimate_from_hits(Method::planted_lower_bound, params.n, delta, hits, trials);
  est.probability *= weight_factor;
  est.ci_low *= weight_factor;
  est.ci_high *= weight_factor;
  return est;
}

double union_bound_given_support(const WeightedGraph& g, double level) {
  const double t2 = level * level;
  double total = 0.0;
  for (const auto& vs : component_vertex_sets(g)) {
    if (vs.size() < 2) continue;
    const auto sub = g.induced(vs);
    const int edges = static_cast<int>(sub.num_edges());
    if (edges == 1) {
      total += 2.0 * stats::normal_tail(level);
    } else {
      const int k = clique_number(sub);
      const double matrix_series = static_cast<double>(vs.size()) * std::exp(-t2 / (2.0 * max_degree(sub)));
      const double chi = stats::chi_square_tail(edges, t2 * k / (2.0 * (k - 1.0)));
      total += std::min({1.0, matrix_series, chi});
    }
    if (total >= 1.0) return 1.0;
  }
  return total;
}

TailEstimate upper_tail_union_bound(const sampler::ModelParams& params, double delta, long long trials,
                                    const McConfig& cfg) {
  params.validate();
  require_trials(trials);
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double level = sampler::upper_level(params.n, delta);
  const long long block = std::max(1, cfg.block);
  const auto blocks = static_cast<std::size_t>((trials + block - 1) / block);
  const auto chunks = parallel_map(blocks, cfg.threads, [&](std::size_t b) {
    Rng rng = make_rng(child_seed(cfg.seed, b));
    std::vector<double> vals;
    const long long begin = static_cast<long long>(b) * block;
    for (long long t = begin; t < std::min(trials, begin + block); ++t) {
      vals.push_back(union_bound_given_support(sampler::sample_network(params, rng), level));
    }
    return vals;
  });
  std::vector<double> values;
  for (const auto& c : chunks) values.insert(values.end(), c.begin(), c.end());
  return estimate_from_values(Method::union_upper_bound, params.n, delta, values);
}

TailEstimate lower_tail_mc(const sampler::ModelParams& params, double delta, long long trials, const McConfig& cfg) {
  params.validate();
  require_trials(trials);
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("lower tail needs delta in (0, 1)");
  const double level = sampler::lower_level(params.n, delta);
  const long long hits = count_hits(trials, cfg, [&](Rng& rng) {
    return top_eigenvalue_at_most(sampler::sample_network(params, rng), level);
  });
  return estimate_from_hits(Method::naive, params.n, delta, hits, trials);
}

ExponentFit fit_exponent(const std::vector<std::pair<int, double>>& samples) {
  if (samples.size() < 3) throw DomainError("fit_exponent needs at least 3 grid points");
  ExponentFit fit;
  std::vector<double> x;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [n, p] = samples[i];
    if (i > 0 && n <= samples[i - 1].first) throw DomainError("fit_exponent needs a strictly increasing n grid");
    if (!(p > 0.0)) {
      throw DomainError("fit_exponent: zero probability at n = " + std::to_string(n) +
                        "; add trials or use a bound estimator");
    }
    fit.n_grid.push_back(n);
    fit.log_probs.push_back(std::log(p));
    x.push_back(std::log(static_cast<double>(n)));
  }
  const auto ls = stats::least_squares(x, fit.log_probs);
  fit.slope = ls.slope;
  fit.intercept = ls.intercept;
  const double half = stats::student_t_quantile(0.95, static_cast<double>(samples.size()) - 2.0) * ls.slope_se;
  fit.slope_ci_low = fit.slope - half;
  fit.slope_ci_high = fit.slope + half;
  return fit;
}

CliqueScaling clique_existence_scaling(const std::vector<int>& n_grid, int k, double d, long long trials,
                                       const McConfig& cfg) {
  if (k < 3) throw DomainError("clique_existence_scaling needs k >= 3");
  CliqueScaling out;
  out.predicted_slope = -(k * (k - 1) / 2.0 - k);
  std::vector<std::pair<int, double>> pts;
  bool all_positive = true;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    sampler::ModelParams params{n_grid[i], d, cfg.seed};
    McConfig c = cfg;
    c.seed = child_seed(cfg.seed, 1000003 + i);
    const long long hits = count_hits(trials, c, [&](Rng& rng) {
      return max_clique(sampler::sample_network(params, rng)).size >= k;
    });
    out.per_n.push_back(estimate_from_hits(Method::naive, n_grid[i], 0.0, hits, trials));
    all_positive = all_positive && hits > 0;
    pts.emplace_back(n_grid[i], out.per_n.back().probability);
  }
  if (all_positive && pts.size() >= 3) {
    out.fit = fit_exponent(pts);
    out.fitted = true;
  }
  return out;
}

}  // namespace spectail::tails
