#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "jigsaw/bounds.hpp"
#include "jigsaw/edge_list.hpp"
#include "jigsaw/experiments.hpp"
#include "jigsaw/exploration.hpp"
#include "jigsaw/io.hpp"
#include "jigsaw/solver.hpp"

namespace jigsaw::cli {
namespace {

using io::json;

constexpr int kManifestVersion = 1;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string format = "json";
  std::string out_path;

  // Graph and density.
  std::optional<Vertex> n;
  std::optional<double> p1, p2, q, c;
  std::uint64_t trials = 0;

  // solve
  std::string input;
  bool reference = false;
  bool no_trace = false;

  // threshold / scale / cycle
  std::string policy = "symmetric";
  std::uint64_t trials_per_probe = 400;
  double rel_tol = 0.05;
  double target = 0.5;
  std::vector<Vertex> ns;
  std::optional<double> p;

  // bounds
  std::vector<Vertex> grid_n;
  std::vector<double> grid_p1, grid_p2;
  std::uint64_t t = 1;

  // explore / dump-graph
  std::string trace = "rounds";
  std::string sprinkle = "none";
};

SeedSpec require_seed(const Config& cfg) {
  if (!cfg.seed) throw UsageError("--seed is required for this subcommand");
  return {*cfg.seed, 0};
}

Vertex require_n(const Config& cfg) {
  if (!cfg.n) throw UsageError("--n is required");
  return *cfg.n;
}

// --q (symmetric split), --c (symmetric at q = c / (n ln n)) or --p1/--p2.
ERParams density(const Config& cfg) {
  const Vertex n = require_n(cfg);
  const int forms = (cfg.q ? 1 : 0) + (cfg.c ? 1 : 0) + ((cfg.p1 || cfg.p2) ? 1 : 0);
  if (forms != 1) throw UsageError("give exactly one of --q, --c or --p1/--p2");
  ERParams p{n, 0, 0};
  if (cfg.q) {
    if (!(*cfg.q >= 0 && *cfg.q <= 1)) throw UsageError("--q must lie in [0, 1]");
    p.p1 = p.p2 = std::sqrt(*cfg.q);
  } else if (cfg.c) {
    if (n < 2) throw UsageError("--c needs n >= 2");
    const double q = *cfg.c / (n * std::log(static_cast<double>(n)));
    if (!(q >= 0 && q <= 1)) throw UsageError("--c gives a product outside [0, 1]");
    p.p1 = p.p2 = std::sqrt(q);
  } else {
    if (!cfg.p1 || !cfg.p2) throw UsageError("--p1 and --p2 go together");
    p.p1 = *cfg.p1;
    p.p2 = *cfg.p2;
  }
  p.validate();
  return p;
}

RatioPolicy ratio_policy(const Config& cfg) {
  if (cfg.policy == "symmetric") {
    if (cfg.p1) throw UsageError("--p1 only applies with --policy fixed-p1");
    return {};
  }
  if (!cfg.p1) throw UsageError("--policy fixed-p1 needs --p1");
  return {RatioPolicy::Kind::fixed_p1, *cfg.p1};
}

ThresholdOptions threshold_options(const Config& cfg) {
  ThresholdOptions o;
  o.trials_per_probe = cfg.trials_per_probe;
  o.rel_tol = cfg.rel_tol;
  o.target = cfg.target;
  o.workers = cfg.workers;
  return o;
}

void require_json(const Config& cfg, const char* sub) {
  if (cfg.format != "json") throw UsageError(std::string(sub) + " only writes json");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json manifest_config(const Config& cfg, const std::string& sub) {
  json j = {{"subcommand", sub}, {"format", cfg.format}};
  if (cfg.seed) j["seed"] = *cfg.seed;
  return j;
}

// ---------------------------------------------------------------------------

std::string cmd_solve(const Config& cfg) {
  require_json(cfg, "solve");
  const DoubleGraph g = read_edge_list_file(cfg.input);
  const SolveOptions opts{.record_trace = !cfg.no_trace};
  const SolveResult r = cfg.reference ? solve_reference(g, opts) : solve_fast(g, opts);
  return dump(io::to_json(r));
}

std::string cmd_sample(const Config& cfg) {
  const ERParams params = density(cfg);
  if (cfg.trials == 0) throw UsageError("--trials must be positive");
  const SeedSpec seed = require_seed(cfg);
  const ProbabilityEstimate e = estimate_percolation_prob(params, cfg.trials, seed, cfg.workers);
  if (cfg.format == "csv") {
    std::ostringstream os;
    io::write_estimate_csv(os, params, e);
    return os.str();
  }
  return dump({{"params", io::to_json(params)}, {"seed", io::to_json(seed)}, {"estimate", io::to_json(e)}});
}

std::string cmd_threshold(const Config& cfg) {
  const Vertex n = require_n(cfg);
  const SeedSpec seed = require_seed(cfg);
  const ThresholdEstimate e = estimate_critical_product(n, ratio_policy(cfg), seed, threshold_options(cfg));
  if (cfg.format == "csv") {
    std::ostringstream os;
    io::write_probes_csv(os, e);
    return os.str();
  }
  return dump(io::to_json(e));
}

std::string cmd_scale(const Config& cfg) {
  if (cfg.ns.empty()) throw UsageError("--ns is required");
  const SeedSpec seed = require_seed(cfg);
  const ScalingStudy s = scaling_study(cfg.ns, ratio_policy(cfg), seed, threshold_options(cfg));
  if (cfg.format == "csv") {
    std::ostringstream os;
    io::write_scaling_csv(os, s);
    return os.str();
  }
  return dump(io::to_json(s));
}

std::string cmd_cycle(const Config& cfg) {
  const Vertex n = require_n(cfg);
  const SeedSpec seed = require_seed(cfg);
  if (cfg.p) {
    if (cfg.trials == 0) throw UsageError("--p needs --trials");
    const ProbabilityEstimate e = estimate_cycle_prob(n, *cfg.p, cfg.trials, seed, cfg.workers);
    const ERParams shown{n, *cfg.p, 1.0};
    if (cfg.format == "csv") {
      std::ostringstream os;
      io::write_estimate_csv(os, shown, e);
      return os.str();
    }
    return dump({{"n", n}, {"p", io::number(*cfg.p)}, {"seed", io::to_json(seed)}, {"estimate", io::to_json(e)}});
  }
  const ThresholdEstimate e = cycle_puzzle_threshold(n, seed, threshold_options(cfg));
  if (cfg.format == "csv") {
    std::ostringstream os;
    io::write_probes_csv(os, e);
    return os.str();
  }
  return dump(io::to_json(e));
}

template <class T>
T broadcast(const std::vector<T>& v, std::size_t i) {
  return v.size() == 1 ? v[0] : v[i];
}

std::string cmd_bounds(const Config& cfg) {
  const std::size_t rows = std::max({cfg.grid_n.size(), cfg.grid_p1.size(), cfg.grid_p2.size()});
  for (std::size_t s : {cfg.grid_n.size(), cfg.grid_p1.size(), cfg.grid_p2.size()}) {
    if (s != 1 && s != rows) throw UsageError("--n, --p1 and --p2 lists must have equal length or length 1");
  }
  if (rows == 0 || cfg.grid_n.empty() || cfg.grid_p1.empty() || cfg.grid_p2.empty()) {
    throw UsageError("bounds needs --n, --p1 and --p2");
  }
  std::ostringstream os;
  json points = json::array();
  if (cfg.format == "csv") {
    os << "n,p1,p2,implied_c,t,k_lo,k_hi,ratio,log_exact_sum,exact_sum,log_chain_binomial,log_chain_k,"
          "log_chain_geometric,geometric_divergent,rkt_unconditional,rkt_small_t,rkt_small_t_applies,"
          "trial_stage_a,trial_stage_b,doubling,completion\n";
  }
  for (std::size_t i = 0; i < rows; ++i) {
    const Vertex n = broadcast(cfg.grid_n, i);
    const double p1 = broadcast(cfg.grid_p1, i), p2 = broadcast(cfg.grid_p2, i);
    const double c = p1 * p2 * n * std::log(static_cast<double>(n));
    const auto part = bounds::part_i_upper_bound(n, p1, p2);
    const auto rkt = bounds::rkt_lower_bound(n, p1, p2, cfg.t);
    const auto trial = bounds::trial_bounds(n, c);
    const auto dbl = bounds::doubling_success_bound(n, c);
    const auto done = bounds::completion_success_bound(n, p1, p2);
    if (cfg.format == "csv") {
      using io::format_double;
      os << n << ',' << format_double(p1) << ',' << format_double(p2) << ',' << format_double(c) << ','
         << cfg.t << ',' << part.k_lo << ',' << part.k_hi << ',' << format_double(part.ratio) << ','
         << format_double(part.exact_sum.log_value) << ',' << format_double(part.exact_sum.value) << ','
         << format_double(part.chain[0].log_value) << ',' << format_double(part.chain[1].log_value) << ','
         << format_double(part.chain[2].log_value) << ',' << (part.chain[2].divergent ? 1 : 0) << ','
         << format_double(rkt.unconditional.value) << ',' << format_double(rkt.small_t.value) << ','
         << (rkt.small_t.hypotheses_hold ? 1 : 0) << ',' << format_double(trial.stage_a.value) << ','
         << format_double(trial.stage_b.value) << ',' << format_double(dbl.value) << ','
         << format_double(done.value) << '\n';
    } else {
      points.push_back({{"n", n},
                        {"p1", io::number(p1)},
                        {"p2", io::number(p2)},
                        {"implied_c", io::number(c)},
                        {"part_i", io::to_json(part)},
                        {"round_step",
                         {{"t", cfg.t},
                          {"t_in_range", rkt.t_in_range},
                          {"unconditional", io::to_json(rkt.unconditional)},
                          {"small_t", io::to_json(rkt.small_t)}}},
                        {"trial", {{"stage_a", io::to_json(trial.stage_a)}, {"stage_b", io::to_json(trial.stage_b)}}},
                        {"doubling", io::to_json(dbl)},
                        {"completion", io::to_json(done)}});
    }
  }
  return cfg.format == "csv" ? os.str() : dump(points);
}

std::string cmd_explore(const Config& cfg) {
  const ERParams params = density(cfg);
  const SeedSpec seed = require_seed(cfg);
  io::TraceLevel level = io::TraceLevel::rounds;
  if (cfg.trace == "summary") level = io::TraceLevel::summary;
  if (cfg.trace == "full") level = io::TraceLevel::full;
  const PercolationCertificate cert = run_three_stage(params, seed);
  if (cfg.format == "csv") {
    std::ostringstream os;
    io::write_certificate_csv(os, cert);
    return os.str();
  }
  return dump(io::to_json(cert, level));
}

std::string cmd_dump_graph(const Config& cfg) {
  const ERParams params = density(cfg);
  const SeedSpec seed = require_seed(cfg);
  std::ostringstream os;
  if (cfg.sprinkle == "none") {
    write_edge_list(os, gen_double(params, seed));
  } else {
    const Sprinkles s = gen_sprinkles(params, seed);
    if (cfg.sprinkle == "union12") write_edge_list(os, s.union12);
    else if (cfg.sprinkle == "union123") write_edge_list(os, s.union123);
    else write_edge_list(os, s.draws[static_cast<std::size_t>(cfg.sprinkle[0] - '1')]);
  }
  return os.str();
}

std::string cmd_stats(const Config& cfg) {
  const ERParams params = density(cfg);
  if (cfg.trials == 0) throw UsageError("--trials must be positive");
  const SeedSpec seed = require_seed(cfg);
  const ClusterStats s = cluster_stats(params, cfg.trials, seed, cfg.workers);
  if (cfg.format == "csv") {
    std::ostringstream os;
    io::write_cluster_stats_csv(os, s);
    return os.str();
  }
  return dump(io::to_json(s));
}

// Arguments that change where or how fast a run happens, never what it
// produces; they stay out of the manifest.
std::vector<std::string> manifest_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--out" || a == "--workers") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--workers=", 0) == 0) continue;
    kept.push_back(a);
  }
  return kept;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << bytes;
  if (!f) throw std::runtime_error("write failed for " + path);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int cmd_replay(const std::string& manifest_path, const Config& cfg, std::ostream& out, std::ostream& err,
               int depth) {
  if (depth > 0) throw UsageError("a manifest cannot replay another manifest");
  std::ifstream f(manifest_path);
  if (!f) throw ParseError(0, "cannot open " + manifest_path);
  json m;
  try {
    m = json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, "manifest: " + std::string(e.what()));
  }
  if (!m.contains("args") || !m["args"].is_array()) throw ParseError(0, "manifest: missing args");
  std::vector<std::string> args = m["args"].get<std::vector<std::string>>();
  args.push_back("--workers");
  args.push_back(std::to_string(cfg.workers));
  if (!cfg.out_path.empty()) {
    args.push_back("--out");
    args.push_back(cfg.out_path);
  }
  return run(args, out, err, depth + 1);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  Config cfg;
  CLI::App app{"Jigsaw percolation solver, generators, exploration and experiments", "jigsaw"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.seed, "Master seed (required for stochastic subcommands)");
  app.add_option("--workers", cfg.workers, "Worker threads; 0 uses all hardware threads")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out_path, "Write output here plus <out>.manifest.json");

  auto add_density = [&](CLI::App* s) {
    s->add_option("--n", cfg.n, "Vertex count")->check(CLI::PositiveNumber);
    s->add_option("--p1", cfg.p1, "Red edge probability");
    s->add_option("--p2", cfg.p2, "Blue edge probability");
    s->add_option("--q", cfg.q, "Product p1 p2, split symmetrically");
    s->add_option("--c", cfg.c, "Symmetric split at q = c / (n ln n)");
  };
  auto add_threshold = [&](CLI::App* s) {
    s->add_option("--trials-per-probe", cfg.trials_per_probe)->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--rel-tol", cfg.rel_tol)->capture_default_str();
    s->add_option("--target", cfg.target)->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "Run the dynamics on an edge-list file");
  solve->add_option("file", cfg.input, "Edge-list file")->required();
  solve->add_flag("--reference", cfg.reference, "Use the literal reference solver");
  solve->add_flag("--no-trace", cfg.no_trace, "Omit the merge trace");

  auto* sample = app.add_subcommand("sample", "Estimate the percolation probability");
  add_density(sample);
  sample->add_option("--trials", cfg.trials)->required();

  auto* threshold = app.add_subcommand("threshold", "Bisect for the critical product q = p1 p2");
  threshold->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  threshold->add_option("--policy", cfg.policy)->check(CLI::IsMember({"symmetric", "fixed-p1"}))->capture_default_str();
  threshold->add_option("--p1", cfg.p1, "Red probability for --policy fixed-p1");
  add_threshold(threshold);

  auto* scale = app.add_subcommand("scale", "Critical product across several n");
  scale->add_option("--ns", cfg.ns, "Comma-separated vertex counts")->required()->delimiter(',');
  scale->add_option("--policy", cfg.policy)->check(CLI::IsMember({"symmetric", "fixed-p1"}))->capture_default_str();
  scale->add_option("--p1", cfg.p1, "Red probability for --policy fixed-p1");
  add_threshold(scale);

  auto* cycle = app.add_subcommand("cycle", "Blue n-cycle with G(n, p) red: threshold in p");
  cycle->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  cycle->add_option("--p", cfg.p, "Estimate at this p instead of bisecting")->check(CLI::Range(0.0, 1.0));
  cycle->add_option("--trials", cfg.trials, "Trials for --p");
  add_threshold(cycle);

  auto* bnds = app.add_subcommand("bounds", "Evaluate the analytic bounds on a grid");
  bnds->add_option("--n", cfg.grid_n, "Comma-separated n values")->required()->delimiter(',');
  bnds->add_option("--p1", cfg.grid_p1, "Comma-separated p1 values")->required()->delimiter(',');
  bnds->add_option("--p2", cfg.grid_p2, "Comma-separated p2 values")->required()->delimiter(',');
  bnds->add_option("--t", cfg.t, "Step index for the round-step bound")->capture_default_str();

  auto* explore = app.add_subcommand("explore", "Three-stage exploration certificate");
  add_density(explore);
  explore->add_option("--trace", cfg.trace)->check(CLI::IsMember({"summary", "rounds", "full"}))->capture_default_str();

  auto* dump_graph = app.add_subcommand("dump-graph", "Write a sampled double graph as an edge list");
  add_density(dump_graph);
  dump_graph->add_option("--sprinkle", cfg.sprinkle)
      ->check(CLI::IsMember({"none", "1", "2", "3", "union12", "union123"}))
      ->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Largest-cluster and round histograms");
  add_density(stats);
  stats->add_option("--trials", cfg.trials)->required();

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Rerun the command recorded in a manifest");
  replay->add_option("manifest", manifest_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string sub = chosen->get_name();
  if (sub == "replay") return cmd_replay(manifest_path, cfg, out, err, depth);

  std::string result;
  if (sub == "solve") result = cmd_solve(cfg);
  else if (sub == "sample") result = cmd_sample(cfg);
  else if (sub == "threshold") result = cmd_threshold(cfg);
  else if (sub == "scale") result = cmd_scale(cfg);
  else if (sub == "cycle") result = cmd_cycle(cfg);
  else if (sub == "bounds") result = cmd_bounds(cfg);
  else if (sub == "explore") result = cmd_explore(cfg);
  else if (sub == "dump-graph") result = cmd_dump_graph(cfg);
  else if (sub == "stats") result = cmd_stats(cfg);

  if (cfg.out_path.empty()) {
    out << result;
    return kExitOk;
  }
  write_file(cfg.out_path, result);
  json manifest = {{"tool", "jigsaw"}, {"manifest_version", kManifestVersion}};
  manifest["config"] = manifest_config(cfg, sub);
  manifest["args"] = manifest_args(args);
  write_file(cfg.out_path + ".manifest.json", dump(manifest));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err, 0);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace jigsaw::cli
