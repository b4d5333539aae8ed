#pragma once
// Structure of networks conditioned on the upper-tail event: maximum clique
// statistics, eigenvector localization and Gaussian flatness on the clique.

#include <span>
#include <string>
#include <vector>

#include "spectail/network_sampler.hpp"
#include "spectail/spectral.hpp"
#include "spectail/tail_lab.hpp"

namespace spectail::structure {

enum class ConditioningMethod { rejection, planted_proxy };

std::string method_name(ConditioningMethod m);
ConditioningMethod parse_method(const std::string& s);  // "rejection" | "planted" | "planted-proxy"

struct ConditioningSpec {
  double delta = 10.0;
  ConditioningMethod method = ConditioningMethod::planted_proxy;
  double kappa = 0.2;
  int target_samples = 100;
  double probability_floor = 1e-5;   // rejection only
  long long probe_trials = 100000;   // rejection only: trials for the P estimate
  long long trial_cap = 10000000;    // rejection only
  int max_attempts = 64;             // planted only: post-selection retries per sample
  void validate() const;
};

struct ConditionedSample {
  WeightedGraph graph;
  SpectralSummary summary;
  long long index = 0;  // trial index (rejection) or sample index (planted)
  int attempts = 1;
};

struct ConditionedSet {
  std::vector<ConditionedSample> samples;
  bool proxy = false;
  long long trials = 0;          // graphs drawn
  double acceptance_rate = 0.0;  // samples / trials
  tails::TailEstimate probe;     // rejection only
};

/// Samples Z conditioned on lambda_1 >= sqrt(2(1+delta) log n). Rejection
/// throws DomainError when the probed probability is below the floor and
/// BudgetExceeded after trial_cap draws. The planted proxy plants a
/// h(delta)-clique and post-selects on the same event.
ConditionedSet conditioned_samples(const sampler::ModelParams& params, const ConditioningSpec& spec,
                                   const tails::McConfig& cfg);

struct EigenvectorReport {
  double mass_on_clique = 0.0;  // sum_{i in K} v_i^2
  double flatness = 0.0;        // sum_{i in K} (v_i^2 - 1/k)^2
  bool a1 = false;              // mass >= 1 - kappa
  bool a2 = false;              // flatness / k <= 40 kappa / k^2
};

EigenvectorReport eigenvector_report(std::span<const double> v, std::span<const int> clique, double kappa);

/// sum_{i in K} (v_i^2 - 1/k)^2, directly.
double flatness_direct(std::span<const double> v, std::span<const int> clique);

/// sum_{i in K} (v_i^2 - S/k)^2 with S = sum_{i in K} v_i^2; equals
/// flatness_direct when S = 1.
double flatness_centered(std::span<const double> v, std::span<const int> clique);

/// (1/k) sum_{i<j in K} (v_i^2 - v_j^2)^2; equals flatness_centered for any v.
double flatness_pairwise(std::span<const double> v, std::span<const int> clique);

struct GaussianFlatness {
  std::vector<int> T;
  double statistic = 0.0;  // (1/h^2) sum_{i != j in T} | |Z_ij| - L/h | / (L/h),  L = sqrt(2(1+delta) log n)
};

GaussianFlatness gaussian_flatness_report(const WeightedGraph& z, std::span<const double> v,
                                          std::span<const int> clique, double delta, double kappa);

struct StructureReport {
  int k_X = 0;
  std::vector<int> clique_vertices;  // K_X
  bool unique_max_clique = true;
  bool all_big_cliques_inside = true;  // every clique of size >= 4 lies in K_X
  bool k_in_minimizers = false;        // k_X in M(delta)
  double lambda1 = 0.0;
  double mass_on_clique = 0.0;
  double flatness = 0.0;
  bool a1 = false;
  bool a2 = false;
  std::vector<int> T_set;
  double gaussian_l1_dev = 0.0;
};

/// Per-sample analysis. Among several maximum cliques K_X is the one with the
/// largest eigenvector mass.
StructureReport analyze_sample(const WeightedGraph& z, const SpectralSummary& s, double delta, double kappa);

struct CliqueStatistics {
  int samples = 0;
  double freq_k_in_minimizers = 0.0;
  double freq_unique = 0.0;
  double freq_all_inside = 0.0;
  double freq_a1_a2 = 0.0;
  double median_gaussian_l1_dev = 0.0;
  double median_mass = 0.0;
  std::vector<int> minimizers;
  std::string warning;  // nonempty when delta <= 3
};

CliqueStatistics clique_statistics(std::span<const StructureReport> reports, double delta);

std::vector<StructureReport> analyze_all(const ConditionedSet& set, double delta, double kappa, int threads);

}  // namespace spectail::structure
