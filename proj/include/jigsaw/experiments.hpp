#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "jigsaw/graph.hpp"
#include "jigsaw/random.hpp"

namespace jigsaw {

struct TrialOutcome {
  bool percolated = false;
  std::uint32_t rounds = 0;
  Vertex largest = 0;

  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// Trial i draws gen_double(params, seed.child(i)).
struct TrialBatch {
  ERParams params;
  std::uint64_t trials = 0;
  SeedSpec seed;
  std::vector<TrialOutcome> outcomes;

  std::uint64_t successes() const;
};

/// `workers` = 0 uses every hardware thread; outcomes do not depend on it.
TrialBatch run_batch(const ERParams& params, std::uint64_t trials, SeedSpec seed,
                     unsigned workers = 1);

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for k successes in t trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t t, double z = kZ95);

struct ProbabilityEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  Interval ci;
};

ProbabilityEstimate make_estimate(std::uint64_t successes, std::uint64_t trials);

/// Throws std::invalid_argument when trials is 0.
ProbabilityEstimate estimate_percolation_prob(const ERParams& params, std::uint64_t trials,
                                              SeedSpec seed, unsigned workers = 1);

/// How a target product q = p1 p2 is split between the colors.
struct RatioPolicy {
  enum class Kind { symmetric, fixed_p1 };
  Kind kind = Kind::symmetric;
  double p1 = 0.0;  // fixed_p1 only

  /// Largest admissible q: 1 when symmetric, p1 when p1 is fixed.
  double q_max() const;
  ERParams at(Vertex n, double q) const;
  std::string name() const;
};

struct Probe {
  double x = 0.0;  // q, or p for the cycle experiment
  ProbabilityEstimate estimate;
};

struct ThresholdOptions {
  std::uint64_t trials_per_probe = 400;
  double rel_tol = 0.05;
  double target = 0.5;
  unsigned workers = 1;
  /// Bracket search gives up after this many doublings or halvings.
  int max_doublings = 40;
};

/// Bisection result for the parameter x (q = p1 p2, or p for the cycle).
struct ThresholdEstimate {
  Vertex n = 0;
  std::string variable;  // "q" or "p"
  std::string policy;
  double target = 0.5;
  double x_lo = 0.0;  // estimate below target
  double x_hi = 0.0;  // estimate at or above target
  double p_lo = 0.0;
  double p_hi = 0.0;
  /// Linear interpolation of the endpoint estimates at the target.
  double x_hat = 0.0;
  std::uint64_t trials_per_probe = 0;
  double rel_tol = 0.0;
  std::vector<Probe> probes;  // in evaluation order
  std::vector<std::string> warnings;
  /// 95% Wilson half-width of a single probe at the target.
  double half_width_at_target = 0.0;
};

/// Bracket by doubling (or halving) from x0 until the estimates straddle the
/// target, then bisect until (x_hi - x_lo) / x_lo <= rel_tol. Every probe
/// uses the same `seed`. Throws std::runtime_error when no bracket appears
/// within opts.max_doublings steps or below x_max.
ThresholdEstimate bisect_threshold(const std::function<ProbabilityEstimate(double, SeedSpec)>& probe,
                                   double x0, double x_max, SeedSpec seed,
                                   const ThresholdOptions& opts);

/// Critical product search from q0 = 1/(n ln n). Requires n >= 64 and
/// rel_tol in (0, 1); throws std::invalid_argument otherwise.
ThresholdEstimate estimate_critical_product(Vertex n, const RatioPolicy& policy, SeedSpec seed,
                                            const ThresholdOptions& opts = {});

struct ScalingRow {
  Vertex n = 0;
  double q_hat = 0.0;
  double normalized = 0.0;  // n q_hat ln n
};

ScalingRow make_scaling_row(Vertex n, double q_hat);

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  std::vector<ThresholdEstimate> estimates;
  /// max / min of the normalized column.
  double spread = 1.0;
};

double normalized_spread(const std::vector<ScalingRow>& rows);

/// One critical-product search per n, the n-th with seed.child(n).
ScalingStudy scaling_study(const std::vector<Vertex>& ns, const RatioPolicy& policy,
                           SeedSpec seed, const ThresholdOptions& opts = {});

/// Jigsaw percolation with the n-cycle as the blue graph and G(n, p) red, run
/// by merging arcs and revealing red pairs between neighbouring arcs only
/// when needed. Same law as building G(n, p) and solving.
bool cycle_puzzle_trial(Vertex n, double p, SeedSpec seed);

/// The same arc-merging process on an explicit red graph, blue the n-cycle.
bool cycle_puzzle_percolates(const Graph& red);

ProbabilityEstimate estimate_cycle_prob(Vertex n, double p, std::uint64_t trials, SeedSpec seed,
                                        unsigned workers = 1);

/// Bisection on p from p0 = 1/ln n. Requires n >= 1024.
ThresholdEstimate cycle_puzzle_threshold(Vertex n, SeedSpec seed, const ThresholdOptions& opts = {});

struct Quantiles {
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};

/// Nearest-rank quantiles of a non-empty sample.
Quantiles nearest_rank_quantiles(std::vector<std::uint64_t> sample);

struct ClusterStats {
  ERParams params;
  std::uint64_t trials = 0;
  SeedSpec seed;
  std::map<Vertex, std::uint64_t> largest_hist;
  std::map<std::uint32_t, std::uint64_t> rounds_hist;
  Quantiles largest;
  Quantiles rounds;
  double percolation_fraction = 0.0;
};

/// Throws std::invalid_argument when trials is 0.
ClusterStats cluster_stats(const ERParams& params, std::uint64_t trials, SeedSpec seed,
                           unsigned workers = 1);

}  // namespace jigsaw
