#include "spectail/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <tuple>

#include <boost/crc.hpp>

#include "CLI11.hpp"
#include "spectail/errors.hpp"
#include "spectail/graph_algorithms.hpp"
#include "spectail/graph_io.hpp"
#include "spectail/kernels.hpp"
#include "spectail/parallel.hpp"
#include "spectail/rate_theory.hpp"
#include "spectail/spectral.hpp"
#include "spectail/stats.hpp"
#include "spectail/structure_lab.hpp"
#include "spectail/tail_lab.hpp"

#ifndef SPECTAIL_VERSION
#define SPECTAIL_VERSION "0.0.0"
#endif

namespace spectail::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("invalid value '" + text + "' for " + what);
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(item, what));
  if (out.empty()) throw UsageError("empty list for " + what);
  return out;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string crc32_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  std::ostringstream os;
  os << std::hex << std::setw(8) << std::setfill('0') << crc.checksum();
  return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UsageError("cannot write " + p.string());
  out << text;
}

// Records carry a sort key so thread scheduling never changes file bytes.
struct Record {
  std::tuple<int, double, std::string, long long> key;
  json value;
};

class OutputDir {
 public:
  OutputDir(const ExperimentConfig& cfg, std::vector<std::string> args) : cfg_(cfg), args_(std::move(args)) {
    start_ = utc_now();
    if (!cfg.out.empty()) {
      dir_ = cfg.out;
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (ec) throw UsageError("cannot create output directory " + cfg.out + ": " + ec.message());
    }
  }

  bool enabled() const { return !dir_.empty(); }
  fs::path path(const std::string& name) const { return dir_ / name; }
  void add_child_seed(const std::string& task, std::uint64_t seed) { child_seeds_[task] = seed; }
  void add_file(const std::string& name) { files_.push_back(name); }

  void write_records(std::vector<Record> records) {
    std::stable_sort(records.begin(), records.end(), [](const Record& a, const Record& b) { return a.key < b.key; });
    std::string text;
    for (const auto& r : records) text += r.value.dump() + "\n";
    write_text(path("records.jsonl"), text);
    add_file("records.jsonl");
  }

  void write_summary(const std::string& csv) {
    write_text(path("summary.csv"), csv);
    add_file("summary.csv");
  }

  void finish() {
    json manifest;
    manifest["command_line"] = args_;
    manifest["config"] = cfg_.to_json();
    manifest["seed"] = cfg_.seed;
    manifest["version"] = SPECTAIL_VERSION;
    manifest["kernels"] = kernels::isa_name(kernels::active_isa());
    manifest["started"] = start_;
    manifest["finished"] = utc_now();
    manifest["child_seeds"] = child_seeds_;
    json sums = json::object();
    for (const auto& f : files_) sums[f] = crc32_file(path(f));
    manifest["checksums_crc32"] = sums;
    manifest["constants"] = {{"chi_tail_C", tails::kChiTailConstant},
                             {"subgraph_bound_C", 1.0},
                             {"planted_proxy", cfg_.command == "structure" && cfg_.method != "rejection"}};
    write_text(path("manifest.json"), manifest.dump(2) + "\n");
  }

 private:
  const ExperimentConfig& cfg_;
  std::vector<std::string> args_;
  fs::path dir_;
  std::string start_;
  std::map<std::string, std::uint64_t> child_seeds_;
  std::vector<std::string> files_;
};

json rate_json(double delta) {
  const auto p = rate::psi(delta);
  return {{"delta", delta}, {"psi", p.psi}, {"minimizers", p.minimizers}, {"h", p.h}, {"x_star", p.x_star}};
}

std::vector<std::string> split_methods(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item != "naive" && item != "planted" && item != "union") throw UsageError("unknown tails method '" + item + "'");
    out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------

int run_rate(const ExperimentConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  OutputDir dir(cfg, args);
  json result;
  json profiles = json::array();
  for (const double delta : cfg.deltas) profiles.push_back(rate_json(delta));
  result = profiles.size() == 1 ? profiles[0] : json{{"profiles", profiles}};
  const auto ladder = rate::transition_points(cfg.ladder);
  result["ladder"] = ladder.points;
  out << result.dump(2) << "\n";
  if (!dir.enabled()) return 0;

  std::vector<Record> records;
  std::string summary = "delta,psi,minimizers,h\n";
  for (const auto& p : profiles) {
    records.push_back({{0, p["delta"].get<double>(), "rate", 0}, p});
    std::string mins;
    for (const int k : p["minimizers"]) mins += (mins.empty() ? "" : ";") + std::to_string(k);
    summary += fmt(p["delta"]) + "," + fmt(p["psi"]) + "," + mins + "," + std::to_string(p["h"].get<int>()) + "\n";
  }
  for (int k = 1; k <= cfg.ladder; ++k) {
    records.push_back({{1, ladder.points[k - 1], "transition", k}, {{"k", k}, {"delta_k", ladder.points[k - 1]}}});
  }
  dir.write_records(std::move(records));
  dir.write_summary(summary);
  emit_plot_data(rate_curve_records(cfg.curve_max, cfg.curve_step, cfg.ladder), PlotKind::rate_curve,
                 dir.path("rate_curve.csv"));
  dir.add_file("rate_curve.csv");
  dir.finish();
  return 0;
}

int run_sample(const ExperimentConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  OutputDir dir(cfg, args);
  sampler::ModelParams params{cfg.n, cfg.d, cfg.seed};
  Rng rng = make_rng(cfg.seed);
  json rec{{"n", cfg.n}, {"d", cfg.d}, {"seed", cfg.seed}};
  WeightedGraph g;
  if (cfg.plant > 0) {
    auto planted = sampler::plant_clique(params, cfg.plant, cfg.deltas.front(), rng);
    g = std::move(planted.graph);
    rec["planted_clique"] = planted.clique;
    rec["planted_level"] = planted.level;
    rec["delta"] = cfg.deltas.front();
  } else {
    g = sampler::sample_network(params, rng);
  }
  io::save_graph(dir.path("graph.edges").string(), g);
  dir.add_file("graph.edges");
  const auto ep = largest_eigenvalue(g);
  rec["edges"] = g.num_edges();
  rec["lambda1"] = ep.value;
  rec["lambda1_over_sqrt_2logn"] = ep.value / std::sqrt(2.0 * std::log(static_cast<double>(cfg.n)));
  rec["max_degree"] = max_degree(g);
  std::vector<Record> records;
  if (cfg.epsilon > 0.0) {
    const auto plan = sampler::make_plan(cfg.n, cfg.d, cfg.epsilon, cfg.deltas.front());
    const auto parts = sampler::decompose(g, plan);
    io::save_graph(dir.path("heavy.edges").string(), parts.heavy);
    io::save_graph(dir.path("light.edges").string(), parts.light);
    dir.add_file("heavy.edges");
    dir.add_file("light.edges");
    sampler::ComponentThresholds th;
    th.epsilon = cfg.epsilon;
    const auto diag = sampler::diagnostics(parts.heavy, th);
    rec["plan"] = {{"threshold", plan.threshold}, {"delta_prime", plan.delta_prime}, {"q_bound", plan.q_bound},
                   {"q_exact", plan.q_exact}};
    rec["heavy_edges"] = parts.heavy.num_edges();
    rec["light_edges"] = parts.light.num_edges();
    rec["heavy_components"] = {{"sizes", diag.component_sizes},     {"edge_counts", diag.edge_counts},
                               {"max_degree", diag.max_degree},     {"num_non_tree", diag.num_non_tree},
                               {"max_degree_ok", diag.max_degree_ok}, {"component_size_ok", diag.component_size_ok},
                               {"excess_ok", diag.excess_ok},       {"all_trees", diag.all_trees},
                               {"few_cycles", diag.few_cycles}};
  }
  records.push_back({{cfg.n, 0.0, "sample", 0}, rec});
  dir.write_records(std::move(records));
  dir.write_summary("n,d,seed,edges,lambda1\n" + std::to_string(cfg.n) + "," + fmt(cfg.d) + "," +
                    std::to_string(cfg.seed) + "," + std::to_string(g.num_edges()) + "," + fmt(ep.value) + "\n");
  dir.finish();
  out << rec.dump(2) << "\n";
  return 0;
}

int run_verify(const ExperimentConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  OutputDir dir(cfg, args);
  WeightedGraph g;
  try {
    g = io::load_graph(cfg.graph);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot load graph: ") + e.what());
  }
  json rec{{"graph", cfg.graph}, {"check", cfg.check}, {"n", g.num_vertices()}, {"edges", g.num_edges()}};
  if (cfg.check == "spectral-bound") {
    const auto s = summarize(g);
    const double bound = s.clique_number >= 2 ? (s.clique_number - 1.0) / s.clique_number * s.frob_sq : 0.0;
    rec["lambda1"] = s.lambda1;
    rec["frobenius_sq"] = s.frob_sq;
    rec["clique_number"] = s.clique_number;
    rec["bound"] = bound;
    rec["gap"] = spectral_bound_gap(g);
    rec["residual"] = s.residual;
    rec["holds"] = true;  // summarize throws InvariantError otherwise
  } else {
    const auto ms = motzkin_straus(g);
    rec["value"] = ms.value;
    rec["clique_size"] = ms.clique_size;
    rec["target"] = (ms.clique_size - 1.0) / (2.0 * ms.clique_size);
    rec["best_unseeded_value"] = ms.best_unseeded_value;
    rec["runs"] = ms.runs;
    rec["monotone"] = ms.monotone;
    rec["weights"] = ms.weights;
  }
  out << rec.dump(2) << "\n";
  if (dir.enabled()) {
    dir.write_records({{{g.num_vertices(), 0.0, cfg.check, 0}, rec}});
    dir.write_summary("check,n,edges,ok\n" + cfg.check + "," + std::to_string(g.num_vertices()) + "," +
                      std::to_string(g.num_edges()) + ",1\n");
    dir.finish();
  }
  return 0;
}

int run_tails(const ExperimentConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  OutputDir dir(cfg, args);
  const bool upper = cfg.mode == "upper";
  const auto methods = upper ? split_methods(cfg.methods) : std::vector<std::string>{"naive"};
  std::vector<Record> records;
  std::vector<json> plain;
  std::vector<std::string> violations;

  for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
    const double delta = cfg.deltas[di];
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
      const int n = cfg.n_grid[ni];
      const std::uint64_t seed = child_seed(cfg.seed, di * 1000003ULL + ni);
      dir.add_child_seed("n=" + std::to_string(n) + ",delta=" + fmt(delta), seed);
      const sampler::ModelParams params{n, cfg.d, seed};
      const tails::McConfig mc{seed, cfg.threads, 256};
      std::map<std::string, tails::TailEstimate> got;
      for (const auto& m : methods) {
        tails::TailEstimate est;
        json extra = json::object();
        if (!upper) {
          est = tails::lower_tail_mc(params, delta, cfg.trials, mc);
          const double p = est.probability;
          extra["level"] = sampler::lower_level(n, delta);
          extra["double_log"] = p > 0.0 && p < 1.0 ? json(std::log(-std::log(p)) / std::log(static_cast<double>(n)))
                                                     : json(nullptr);
        } else if (m == "naive") {
          est = cfg.min_hits > 0
                    ? tails::upper_tail_naive_adaptive(params, delta, cfg.min_hits, cfg.trials, cfg.max_trials, mc)
                    : tails::upper_tail_naive(params, delta, cfg.trials, mc);
        } else if (m == "planted") {
          const int k = cfg.plant > 0 ? cfg.plant : rate::psi(delta).h;
          est = tails::upper_tail_planted_lower(params, delta, k, cfg.trials, mc);
          extra["k"] = k;
          extra["analytic_exponent"] = tails::planted_exponent(k, delta);
        } else {
          est = tails::upper_tail_union_bound(params, delta, cfg.trials, mc);
        }
        got[m] = est;
        json rec{{"mode", cfg.mode},        {"n", n},
                 {"d", cfg.d},              {"delta", delta},
                 {"method", tails::method_name(est.method)},
                 {"probability", est.probability},
                 {"ci_low", est.ci_low},    {"ci_high", est.ci_high},
                 {"trials", est.trials},    {"hits", est.hits},
                 {"seed", seed}};
        rec.update(extra);
        plain.push_back(rec);
        records.push_back({{n, delta, rec["method"].get<std::string>(), 0}, rec});
      }
      if (got.count("planted") && got.count("naive") && got["planted"].probability > got["naive"].ci_high) {
        violations.push_back("planted lower bound above naive ci_high at n=" + std::to_string(n) + ", delta=" + fmt(delta));
      }
      if (got.count("union") && got.count("naive") && got["naive"].ci_low > got["union"].probability) {
        violations.push_back("naive ci_low above union upper bound at n=" + std::to_string(n) + ", delta=" + fmt(delta));
      }
    }
  }

  // Exponent fits per (delta, method).
  std::string summary = "mode,delta,method,points,slope,slope_ci_low,slope_ci_high,predicted\n";
  json fits = json::array();
  for (const double delta : cfg.deltas) {
    for (const auto& m : methods) {
      std::vector<std::pair<int, double>> pts;
      std::string method;
      for (const auto& r : plain) {
        if (r["delta"].get<double>() != delta) continue;
        const std::string rm = r["method"];
        if ((m == "naive" && rm != "naive") || (m == "planted" && rm != "planted-lower-bound") ||
            (m == "union" && rm != "union-upper-bound"))
          continue;
        method = rm;
        if (upper) {
          if (r["probability"].get<double>() > 0.0) pts.emplace_back(r["n"].get<int>(), r["probability"].get<double>());
        } else if (!r["double_log"].is_null()) {
          pts.emplace_back(r["n"].get<int>(), r["double_log"].get<double>());
        }
      }
      const double predicted = upper ? -rate::psi(delta).psi : rate::lower_tail_exponent(delta);
      std::string row = cfg.mode + "," + fmt(delta) + "," + method + "," + std::to_string(pts.size()) + ",";
      if (upper && pts.size() >= 3) {
        const auto f = tails::fit_exponent(pts);
        row += fmt(f.slope) + "," + fmt(f.slope_ci_low) + "," + fmt(f.slope_ci_high);
      } else if (!upper && !pts.empty()) {
        row += fmt(pts.back().second) + ",,";  // double-log ratio at the largest n
      } else {
        row += ",,";
      }
      summary += row + "," + fmt(predicted) + "\n";
    }
  }

  if (dir.enabled()) {
    dir.write_records(std::move(records));
    dir.write_summary(summary);
    if (upper) {
      emit_plot_data(plain, PlotKind::exponent_scatter, dir.path("exponent_scatter.csv"));
      dir.add_file("exponent_scatter.csv");
    }
    dir.finish();
  }
  out << summary;
  if (!violations.empty()) {
    for (const auto& v : violations) out << "invariant violated: " << v << "\n";
    return 2;
  }
  return 0;
}

int run_structure(const ExperimentConfig& cfg, const std::vector<std::string>& args, std::ostream& out) {
  OutputDir dir(cfg, args);
  std::vector<Record> records;
  std::vector<json> aggregates;
  std::string summary =
      "delta,method,samples,acceptance_rate,freq_k_in_minimizers,freq_unique,freq_all_inside,freq_a1_a2,"
      "median_gaussian_l1_dev,median_mass\n";
  for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
    const double delta = cfg.deltas[di];
    const std::uint64_t seed = child_seed(cfg.seed, di);
    dir.add_child_seed("delta=" + fmt(delta), seed);
    structure::ConditioningSpec spec;
    spec.delta = delta;
    spec.method = structure::parse_method(cfg.method);
    spec.kappa = cfg.kappa;
    spec.target_samples = cfg.samples;
    spec.probe_trials = cfg.probe_trials;
    spec.trial_cap = cfg.max_trials;
    const tails::McConfig mc{seed, cfg.threads, 256};
    const auto set = structure::conditioned_samples({cfg.n, cfg.d, seed}, spec, mc);
    const auto reports = structure::analyze_all(set, delta, cfg.kappa, cfg.threads);
    const auto st = structure::clique_statistics(reports, delta);
    const std::string method = structure::method_name(spec.method);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      json rec{{"delta", delta},
               {"n", cfg.n},
               {"method", method},
               {"proxy", set.proxy},
               {"sample", set.samples[i].index},
               {"lambda1", r.lambda1},
               {"k_X", r.k_X},
               {"clique_vertices", r.clique_vertices},
               {"unique_max_clique", r.unique_max_clique},
               {"all_big_cliques_inside", r.all_big_cliques_inside},
               {"k_in_minimizers", r.k_in_minimizers},
               {"mass_on_clique", r.mass_on_clique},
               {"flatness", r.flatness},
               {"A1", r.a1},
               {"A2", r.a2},
               {"T_set", r.T_set},
               {"gaussian_l1_dev", r.gaussian_l1_dev}};
      records.push_back({{cfg.n, delta, method, set.samples[i].index}, rec});
    }
    json agg{{"delta", delta},
             {"method", method},
             {"proxy", set.proxy},
             {"samples", st.samples},
             {"trials", set.trials},
             {"acceptance_rate", set.acceptance_rate},
             {"minimizers", st.minimizers},
             {"freq_k_in_minimizers", st.freq_k_in_minimizers},
             {"freq_unique", st.freq_unique},
             {"freq_all_inside", st.freq_all_inside},
             {"freq_a1_a2", st.freq_a1_a2},
             {"median_gaussian_l1_dev", st.median_gaussian_l1_dev},
             {"median_mass", st.median_mass}};
    if (!st.warning.empty()) {
      agg["warning"] = st.warning;
      std::cerr << "warning: " << st.warning << "\n";
    }
    if (!set.proxy) agg["probe"] = {{"probability", set.probe.probability}, {"ci_low", set.probe.ci_low},
                                    {"ci_high", set.probe.ci_high}, {"trials", set.probe.trials}};
    aggregates.push_back(agg);
    summary += fmt(delta) + "," + method + "," + std::to_string(st.samples) + "," + fmt(set.acceptance_rate) + "," +
               fmt(st.freq_k_in_minimizers) + "," + fmt(st.freq_unique) + "," + fmt(st.freq_all_inside) + "," +
               fmt(st.freq_a1_a2) + "," + fmt(st.median_gaussian_l1_dev) + "," + fmt(st.median_mass) + "\n";
  }
  if (dir.enabled()) {
    dir.write_records(std::move(records));
    dir.write_summary(summary);
    write_text(dir.path("aggregate.json"), json(aggregates).dump(2) + "\n");
    dir.add_file("aggregate.json");
    emit_plot_data(aggregates, PlotKind::structure_curve, dir.path("structure_curve.csv"));
    dir.add_file("structure_curve.csv");
    dir.finish();
  }
  out << summary;
  return 0;
}

}  // namespace

json ExperimentConfig::to_json() const {
  return {{"command", command}, {"n", n},
          {"n_grid", n_grid},   {"d", d},
          {"delta", deltas},    {"epsilon", epsilon},
          {"kappa", kappa},     {"trials", trials},
          {"min_hits", min_hits}, {"max_trials", max_trials},
          {"probe_trials", probe_trials}, {"threads", threads},
          {"seed", seed},       {"out", out},
          {"mode", mode},       {"methods", methods},
          {"plant", plant},     {"samples", samples},
          {"method", method},   {"graph", graph},
          {"check", check},     {"ladder", ladder},
          {"curve_max", curve_max}, {"curve_step", curve_step}};
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw UsageError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

namespace {

struct RawOptions {
  std::string n_grid, delta, config;
};

// Builds the parser; `cfg` and `raw` receive the values.
std::unique_ptr<CLI::App> make_app(ExperimentConfig& cfg, RawOptions& raw) {
  auto app = std::make_unique<CLI::App>("Sparse Gaussian network tail lab", "spectail");
  app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app->require_subcommand(1, 1);
  auto common = [&](CLI::App* sc) {
    sc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sc->add_option("--config", raw.config, "key = value configuration file");
    sc->add_option("--out", cfg.out, "output directory");
    sc->add_option("--seed", cfg.seed, "master seed");
    sc->add_option("--threads", cfg.threads, "worker threads (default $SPECTAIL_THREADS)");
  };
  auto* rate = app->add_subcommand("rate", "rate function, minimizers and transition ladder");
  common(rate);
  rate->add_option("--delta", raw.delta, "delta or comma list");
  rate->add_option("--ladder", cfg.ladder, "largest k of the transition ladder");
  rate->add_option("--curve-max", cfg.curve_max, "rate curve upper end");
  rate->add_option("--curve-step", cfg.curve_step, "rate curve step");

  auto* sample = app->add_subcommand("sample", "draw one network");
  common(sample);
  sample->add_option("--n", cfg.n, "vertices");
  sample->add_option("--d", cfg.d, "average degree");
  sample->add_option("--epsilon", cfg.epsilon, "sparsification exponent (0: no split)");
  sample->add_option("--delta", raw.delta, "tail excess (planting and split)");
  sample->add_option("--plant", cfg.plant, "planted clique size");

  auto* verify = app->add_subcommand("verify", "check a graph file");
  common(verify);
  verify->add_option("--graph", cfg.graph, "edge list or .json graph")->required();
  verify->add_option("--check", cfg.check, "spectral-bound | motzkin-straus")
      ->check(CLI::IsMember({"spectral-bound", "motzkin-straus"}));

  auto* tails = app->add_subcommand("tails", "Monte Carlo tail estimates and exponent fits");
  common(tails);
  tails->add_option("--mode", cfg.mode, "upper | lower")->check(CLI::IsMember({"upper", "lower"}));
  tails->add_option("--n-grid", raw.n_grid, "comma list of n");
  tails->add_option("--d", cfg.d, "average degree");
  tails->add_option("--delta", raw.delta, "delta or comma list");
  tails->add_option("--trials", cfg.trials, "trials per point (initial trials when --min-hits > 0)");
  tails->add_option("--min-hits", cfg.min_hits, "upper naive: grow trials until this many hits");
  tails->add_option("--max-trials", cfg.max_trials, "cap for adaptive trials");
  tails->add_option("--methods", cfg.methods, "subset of naive,planted,union (upper mode)");
  tails->add_option("--plant", cfg.plant, "planted clique size (default h(delta))");

  auto* structure = app->add_subcommand("structure", "structure of conditioned samples");
  common(structure);
  structure->add_option("--n", cfg.n, "vertices");
  structure->add_option("--d", cfg.d, "average degree");
  structure->add_option("--delta", raw.delta, "delta or comma list");
  structure->add_option("--kappa", cfg.kappa, "localization tolerance");
  structure->add_option("--samples", cfg.samples, "conditioned samples per delta");
  structure->add_option("--method", cfg.method, "rejection | planted")
      ->check(CLI::IsMember({"rejection", "planted", "planted-proxy"}));
  structure->add_option("--probe-trials", cfg.probe_trials, "rejection: trials for the probability probe");
  structure->add_option("--max-trials", cfg.max_trials, "rejection: trial cap");
  return app;
}

std::string find_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  return path;
}

}  // namespace

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError("missing subcommand");
  // File values go in front of the flags; TakeLast then gives flag > file > default.
  std::vector<std::string> merged{args.front()};
  if (const auto path = find_config(args); !path.empty()) {
    for (const auto& [k, v] : read_config_file(path)) {
      if (k == "config") continue;
      merged.push_back("--" + k);
      merged.push_back(v);
    }
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());

  ExperimentConfig cfg;
  cfg.threads = default_threads();
  RawOptions raw;
  auto app = make_app(cfg, raw);
  std::vector<std::string> reversed(merged.rbegin(), merged.rend());
  try {
    app->parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  cfg.command = app->get_subcommands().front()->get_name();
  if (!raw.n_grid.empty()) cfg.n_grid = parse_list<int>(raw.n_grid, "--n-grid");
  if (!raw.delta.empty()) cfg.deltas = parse_list<double>(raw.delta, "--delta");
  validate(cfg);
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
  };
  check(cfg.threads >= 1, "--threads must be at least 1");
  try {
    if (cfg.command == "rate") {
      for (const double delta : cfg.deltas) rate::psi(delta);
      check(cfg.ladder >= 1, "--ladder must be at least 1");
      check(cfg.curve_max >= 0.0 && cfg.curve_step > 0.0, "rate curve needs --curve-max >= 0 and --curve-step > 0");
    } else if (cfg.command == "sample") {
      check(!cfg.out.empty(), "sample needs --out");
      sampler::ModelParams{cfg.n, cfg.d, cfg.seed}.validate();
      if (cfg.plant > 0) {
        check(cfg.plant >= 2 && cfg.plant <= cfg.n, "--plant must lie in [2, n]");
        check(cfg.deltas.front() > 0.0, "--delta must be positive");
      }
      if (cfg.epsilon != 0.0) sampler::make_plan(cfg.n, cfg.d, cfg.epsilon, cfg.deltas.front());
    } else if (cfg.command == "verify") {
      check(!cfg.graph.empty(), "verify needs --graph");
    } else if (cfg.command == "tails") {
      check(cfg.trials >= 1, "--trials must be at least 1");
      check(cfg.min_hits >= 0, "--min-hits must be nonnegative");
      check(cfg.max_trials >= cfg.trials, "--max-trials must be >= --trials");
      check(std::is_sorted(cfg.n_grid.begin(), cfg.n_grid.end()) &&
                std::adjacent_find(cfg.n_grid.begin(), cfg.n_grid.end()) == cfg.n_grid.end(),
            "--n-grid must be strictly increasing");
      for (const int n : cfg.n_grid) sampler::ModelParams{n, cfg.d, cfg.seed}.validate();
      for (const double delta : cfg.deltas) {
        if (cfg.mode == "upper") {
          check(delta > 0.0, "upper tail needs delta > 0");
        } else {
          check(delta > 0.0 && delta < 1.0, "lower tail needs delta in (0, 1)");
        }
      }
      if (cfg.mode == "upper") {
        split_methods(cfg.methods);
        check(cfg.plant == 0 || cfg.plant >= 2, "--plant must be at least 2");
      }
    } else if (cfg.command == "structure") {
      sampler::ModelParams{cfg.n, cfg.d, cfg.seed}.validate();
      check(cfg.samples >= 1, "--samples must be at least 1");
      for (const double delta : cfg.deltas) {
        structure::ConditioningSpec spec;
        spec.delta = delta;
        spec.kappa = cfg.kappa;
        spec.target_samples = cfg.samples;
        spec.probe_trials = cfg.probe_trials;
        spec.trial_cap = cfg.max_trials;
        spec.validate();
        check(rate::psi(delta).h <= cfg.n, "h(delta) exceeds n");
      }
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const UsageError& e) {
    const bool help = std::any_of(args.begin(), args.end(), [](const std::string& a) { return a == "--help" || a == "-h"; });
    RawOptions raw;
    ExperimentConfig scratch;
    auto app = make_app(scratch, raw);
    if (help) {
      CLI::App* target = app.get();
      if (!args.empty()) {
        try {
          target = app->get_subcommand(args.front());
        } catch (const CLI::OptionNotFound&) {
        }
      }
      out << target->help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << app->help();
    return 1;
  }
  try {
    if (cfg.command == "rate") return run_rate(cfg, args, out);
    if (cfg.command == "sample") return run_sample(cfg, args, out);
    if (cfg.command == "verify") return run_verify(cfg, args, out);
    if (cfg.command == "tails") return run_tails(cfg, args, out);
    return run_structure(cfg, args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "invariant violated: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 2;
  }
}

std::vector<json> rate_curve_records(double max_delta, double step, int k_max) {
  if (!(step > 0.0) || max_delta < 0.0) throw DomainError("rate curve needs max >= 0 and step > 0");
  const auto ladder = rate::transition_points(std::max(k_max, 2));
  std::vector<json> out;
  const auto count = static_cast<long long>(std::floor(max_delta / step + 1e-9));
  for (long long i = 1; i <= count; ++i) {
    double delta = static_cast<double>(i) * step;
    bool transition = false;
    for (std::size_t k = 1; k < ladder.points.size(); ++k) {
      if (std::abs(delta - ladder.points[k]) < 1e-6 * step) {
        delta = ladder.points[k];
        transition = true;
      }
    }
    auto rec = rate_json(delta);
    rec["transition"] = transition;
    out.push_back(rec);
  }
  return out;
}

void emit_plot_data(const std::vector<json>& results, PlotKind kind, const fs::path& file) {
  std::ostringstream os;
  switch (kind) {
    case PlotKind::rate_curve:
      os << "delta,psi,h,transition\n";
      for (const auto& r : results)
        os << fmt(r.at("delta")) << "," << fmt(r.at("psi")) << "," << r.at("h").get<int>() << ","
           << (r.value("transition", false) ? 1 : 0) << "\n";
      break;
    case PlotKind::exponent_scatter: {
      os << "method,delta,n,log_n,log_p,slope,intercept\n";
      std::map<std::pair<std::string, double>, std::vector<std::pair<int, double>>> groups;
      for (const auto& r : results) {
        const double p = r.at("probability");
        if (p > 0.0) groups[{r.at("method").get<std::string>(), r.at("delta").get<double>()}].emplace_back(r.at("n"), p);
      }
      for (auto& [key, pts] : groups) {
        std::sort(pts.begin(), pts.end());
        std::string slope, intercept;
        if (pts.size() >= 3) {
          const auto f = tails::fit_exponent(pts);
          slope = fmt(f.slope);
          intercept = fmt(f.intercept);
        }
        for (const auto& [n, p] : pts)
          os << key.first << "," << fmt(key.second) << "," << n << "," << fmt(std::log(static_cast<double>(n))) << ","
             << fmt(std::log(p)) << "," << slope << "," << intercept << "\n";
      }
      break;
    }
    case PlotKind::structure_curve:
      os << "delta,freq_k_in_minimizers,freq_unique,freq_all_inside,freq_a1_a2,median_gaussian_l1_dev\n";
      for (const auto& r : results)
        os << fmt(r.at("delta")) << "," << fmt(r.at("freq_k_in_minimizers")) << "," << fmt(r.at("freq_unique")) << ","
           << fmt(r.at("freq_all_inside")) << "," << fmt(r.at("freq_a1_a2")) << ","
           << fmt(r.at("median_gaussian_l1_dev")) << "\n";
      break;
  }
  write_text(file, os.str());
}

}  // namespace spectail::cli
