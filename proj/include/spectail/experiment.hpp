#pragma once
// Experiment orchestration behind the spectail command-line tool.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace spectail::cli {

/// Bad flags, bad config files, or out-of-range parameters. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;  // rate | sample | verify | tails | structure
  int n = 512;
  std::vector<int> n_grid{128, 256, 512, 1024, 2048};
  double d = 2.0;
  std::vector<double> deltas{0.5};
  double epsilon = 0.0;  // 0: no sparsification split
  double kappa = 0.2;
  long long trials = 10000;
  long long min_hits = 0;  // upper tails: > 0 switches to adaptive trial counts
  long long max_trials = 10000000;
  long long probe_trials = 100000;
  int threads = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string mode = "upper";
  std::string methods = "naive,planted,union";
  int plant = 0;  // 0: h(delta) for tails, no planting for sample
  int samples = 100;
  std::string method = "planted";
  std::string graph;
  std::string check = "spectral-bound";
  int ladder = 6;
  double curve_max = 30.0;
  double curve_step = 0.1;

  nlohmann::json to_json() const;
};

/// key = value lines, '#' comments. Keys are long flag names.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Resolves flags over an optional --config file over defaults. Throws
/// UsageError on anything invalid; never starts work.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Range checks for the subcommand's parameters.
void validate(const ExperimentConfig& cfg);

/// Full command: 0 success, 1 usage or configuration error, 2 failed invariant.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

enum class PlotKind { rate_curve, exponent_scatter, structure_curve };

/// Plot-ready CSV from result records; no records gives a header-only file.
void emit_plot_data(const std::vector<nlohmann::json>& results, PlotKind kind, const std::filesystem::path& file);

/// Records of psi over (0, max] at `step`, with the grid snapped onto the
/// transition points it passes.
std::vector<nlohmann::json> rate_curve_records(double max_delta, double step, int k_max);

}  // namespace spectail::cli
