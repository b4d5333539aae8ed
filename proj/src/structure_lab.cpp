#include "spectail/structure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "spectail/clique.hpp"
#include "spectail/errors.hpp"
#include "spectail/parallel.hpp"
#include "spectail/rate_theory.hpp"
#include "spectail/stats.hpp"

namespace spectail::structure {

namespace {

constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;
constexpr std::uint64_t kSampleStream = 0x73616d706c65ULL;

double mass_on(std::span<const double> v, std::span<const int> clique) {
  double m = 0.0;
  for (const int i : clique) m += v[i] * v[i];
  return m;
}

}  // namespace

std::string method_name(ConditioningMethod m) {
  return m == ConditioningMethod::rejection ? "rejection" : "planted-proxy";
}

ConditioningMethod parse_method(const std::string& s) {
  if (s == "rejection") return ConditioningMethod::rejection;
  if (s == "planted" || s == "planted-proxy") return ConditioningMethod::planted_proxy;
  throw DomainError("unknown conditioning method '" + s + "' (rejection | planted)");
}

void ConditioningSpec::validate() const {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("kappa must lie in (0, 1)");
  if (target_samples < 1) throw DomainError("target_samples must be at least 1");
  if (!(probability_floor > 0.0 && probability_floor < 1.0)) throw DomainError("probability floor must lie in (0, 1)");
  if (probe_trials < 1 || trial_cap < 1) throw DomainError("probe_trials and trial_cap must be positive");
  if (max_attempts < 1) throw DomainError("max_attempts must be at least 1");
}

ConditionedSet conditioned_samples(const sampler::ModelParams& params, const ConditioningSpec& spec,
                                   const tails::McConfig& cfg) {
  params.validate();
  spec.validate();
  const double level = sampler::upper_level(params.n, spec.delta);
  ConditionedSet out;
  const int threads = std::max(1, cfg.threads);

  if (spec.method == ConditioningMethod::planted_proxy) {
    out.proxy = true;
    const int k = rate::psi(spec.delta).h;
    if (k > params.n) throw DomainError("h(delta) exceeds n");
    auto samples = parallel_map(static_cast<std::size_t>(spec.target_samples), threads, [&](std::size_t i) {
      Rng rng = make_rng(child_seed(child_seed(cfg.seed, kSampleStream), i));
      for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
        auto planted = sampler::plant_clique(params, k, spec.delta, rng);
        auto summary = summarize(planted.graph);
        if (summary.lambda1 >= level) {
          return ConditionedSample{std::move(planted.graph), std::move(summary), static_cast<long long>(i), attempt};
        }
      }
      throw BudgetExceeded("planted sample " + std::to_string(i) + " failed post-selection " +
                           std::to_string(spec.max_attempts) + " times");
    });
    for (const auto& s : samples) out.trials += s.attempts;
    out.samples = std::move(samples);
    out.acceptance_rate = static_cast<double>(out.samples.size()) / static_cast<double>(out.trials);
    return out;
  }

  tails::McConfig probe_cfg = cfg;
  probe_cfg.seed = child_seed(cfg.seed, kProbeStream);
  out.probe = tails::upper_tail_naive(params, spec.delta, spec.probe_trials, probe_cfg);
  if (out.probe.probability < spec.probability_floor) {
    throw DomainError("estimated P(lambda_1 >= level) = " + std::to_string(out.probe.probability) +
                      " is below the rejection floor " + std::to_string(spec.probability_floor) +
                      "; use the planted proxy");
  }

  // Blocks are scanned in order; accepted samples are kept in trial order, so
  // the first target_samples do not depend on how many blocks run at once.
  const long long block = std::max(1, cfg.block);
  const std::uint64_t stream = child_seed(cfg.seed, kSampleStream);
  long long next_block = 0;
  while (static_cast<int>(out.samples.size()) < spec.target_samples) {
    if (next_block * block >= spec.trial_cap) {
      throw BudgetExceeded("rejection sampling reached the trial cap " + std::to_string(spec.trial_cap) + " with " +
                           std::to_string(out.samples.size()) + " accepted samples");
    }
    const long long wave = threads;
    auto found = parallel_map(static_cast<std::size_t>(wave), threads, [&](std::size_t w) {
      const long long b = next_block + static_cast<long long>(w);
      std::vector<ConditionedSample> acc;
      Rng rng = make_rng(child_seed(stream, static_cast<std::uint64_t>(b)));
      const long long begin = b * block;
      const long long end = std::min(spec.trial_cap, begin + block);
      for (long long t = begin; t < end; ++t) {
        auto g = sampler::sample_network(params, rng);
        if (!tails::top_eigenvalue_at_least(g, level)) continue;
        auto summary = summarize(g);
        if (summary.lambda1 >= level) acc.push_back({std::move(g), std::move(summary), t, 1});
      }
      return acc;
    });
    for (auto& f : found)
      for (auto& s : f) out.samples.push_back(std::move(s));
    next_block += wave;
  }
  out.samples.resize(spec.target_samples);
  out.trials = out.samples.back().index + 1;
  out.acceptance_rate = static_cast<double>(out.samples.size()) / static_cast<double>(out.trials);
  return out;
}

double flatness_direct(std::span<const double> v, std::span<const int> clique) {
  const double inv_k = 1.0 / static_cast<double>(clique.size());
  double f = 0.0;
  for (const int i : clique) f += (v[i] * v[i] - inv_k) * (v[i] * v[i] - inv_k);
  return f;
}

double flatness_centered(std::span<const double> v, std::span<const int> clique) {
  const double mean = mass_on(v, clique) / static_cast<double>(clique.size());
  double f = 0.0;
  for (const int i : clique) f += (v[i] * v[i] - mean) * (v[i] * v[i] - mean);
  return f;
}

double flatness_pairwise(std::span<const double> v, std::span<const int> clique) {
  double f = 0.0;
  for (std::size_t a = 0; a < clique.size(); ++a)
    for (std::size_t b = a + 1; b < clique.size(); ++b) {
      const double diff = v[clique[a]] * v[clique[a]] - v[clique[b]] * v[clique[b]];
      f += diff * diff;
    }
  return f / static_cast<double>(clique.size());
}

EigenvectorReport eigenvector_report(std::span<const double> v, std::span<const int> clique, double kappa) {
  if (clique.size() < 2) throw DomainError("eigenvector report needs a clique of size >= 2");
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("kappa must lie in (0, 1)");
  const double k = static_cast<double>(clique.size());
  EigenvectorReport r;
  r.mass_on_clique = std::clamp(mass_on(v, clique), 0.0, 1.0);
  r.flatness = flatness_direct(v, clique);
  r.a1 = r.mass_on_clique >= 1.0 - kappa;
  r.a2 = r.flatness / k <= 40.0 * kappa / (k * k);
  return r;
}

GaussianFlatness gaussian_flatness_report(const WeightedGraph& z, std::span<const double> v,
                                          std::span<const int> clique, double delta, double kappa) {
  if (clique.size() < 2) throw DomainError("gaussian flatness needs a clique of size >= 2");
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("kappa must lie in (0, 1)");
  GaussianFlatness out;
  const double k = static_cast<double>(clique.size());
  const double radius = std::pow(40.0 * kappa, 0.25) / k;
  for (const int i : clique)
    if (std::abs(v[i] * v[i] - 1.0 / k) < radius) out.T.push_back(i);
  const double h = rate::psi(delta).h;
  const double target = sampler::upper_level(z.num_vertices(), delta) / h;
  double sum = 0.0;
  for (std::size_t a = 0; a < out.T.size(); ++a)
    for (std::size_t b = a + 1; b < out.T.size(); ++b) sum += 2.0 * std::abs(std::abs(z.weight(out.T[a], out.T[b])) - target);
  out.statistic = sum / (h * h) / target;
  return out;
}

StructureReport analyze_sample(const WeightedGraph& z, const SpectralSummary& s, double delta, double kappa) {
  StructureReport r;
  r.lambda1 = s.lambda1;
  r.k_X = s.clique_number;
  if (r.k_X < 2) throw DomainError("structure analysis needs at least one edge");
  const auto& v = s.top_eigenvector;
  auto maximum = all_maximum_cliques(z);
  r.unique_max_clique = maximum.size() == 1;
  r.clique_vertices = maximum.front();
  double best = mass_on(v, r.clique_vertices);
  for (const auto& c : maximum) {
    const double m = mass_on(v, c);
    if (m > best) {
      best = m;
      r.clique_vertices = c;
    }
  }
  std::vector<char> in_k(z.num_vertices(), 0);
  for (const int i : r.clique_vertices) in_k[i] = 1;
  for (const auto& c : maximal_cliques(z, 4)) {
    if (!std::all_of(c.begin(), c.end(), [&](int i) { return in_k[i] != 0; })) {
      r.all_big_cliques_inside = false;
      break;
    }
  }
  const auto mins = rate::psi(delta).minimizers;
  r.k_in_minimizers = std::find(mins.begin(), mins.end(), r.k_X) != mins.end();
  const auto ev = eigenvector_report(v, r.clique_vertices, kappa);
  r.mass_on_clique = ev.mass_on_clique;
  r.flatness = ev.flatness;
  r.a1 = ev.a1;
  r.a2 = ev.a2;
  auto gf = gaussian_flatness_report(z, v, r.clique_vertices, delta, kappa);
  r.T_set = std::move(gf.T);
  r.gaussian_l1_dev = gf.statistic;
  return r;
}

std::vector<StructureReport> analyze_all(const ConditionedSet& set, double delta, double kappa, int threads) {
  return parallel_map(set.samples.size(), threads, [&](std::size_t i) {
    return analyze_sample(set.samples[i].graph, set.samples[i].summary, delta, kappa);
  });
}

CliqueStatistics clique_statistics(std::span<const StructureReport> reports, double delta) {
  if (reports.empty()) throw DomainError("clique statistics need at least one sample");
  CliqueStatistics out;
  out.samples = static_cast<int>(reports.size());
  out.minimizers = rate::psi(delta).minimizers;
  if (delta <= 3.0) out.warning = "delta <= 3: outside the regime of the structure theorem";
  std::vector<double> dev, mass;
  for (const auto& r : reports) {
    out.freq_k_in_minimizers += r.k_in_minimizers;
    out.freq_unique += r.unique_max_clique;
    out.freq_all_inside += r.all_big_cliques_inside;
    out.freq_a1_a2 += r.a1 && r.a2;
    dev.push_back(r.gaussian_l1_dev);
    mass.push_back(r.mass_on_clique);
  }
  const double cnt = static_cast<double>(reports.size());
  out.freq_k_in_minimizers /= cnt;
  out.freq_unique /= cnt;
  out.freq_all_inside /= cnt;
  out.freq_a1_a2 /= cnt;
  out.median_gaussian_l1_dev = stats::median(dev);
  out.median_mass = stats::median(mass);
  return out;
}

}  // namespace spectail::structure
