#include "jigsaw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "jigsaw/parallel.hpp"
#include "jigsaw/solver.hpp"

namespace jigsaw {

std::uint64_t TrialBatch::successes() const {
  return static_cast<std::uint64_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [](const TrialOutcome& o) { return o.percolated; }));
}

TrialBatch run_batch(const ERParams& params, std::uint64_t trials, SeedSpec seed, unsigned workers) {
  params.validate();
  TrialBatch batch;
  batch.params = params;
  batch.trials = trials;
  batch.seed = seed;
  batch.outcomes = parallel_map(trials, workers, [&](std::size_t i) {
    const DoubleGraph g = gen_double(params, seed.child(i));
    const SolveResult r = solve_fast(g, {.record_trace = false});
    return TrialOutcome{r.percolates(), r.rounds, r.final.largest_block()};
  });
  return batch;
}

Interval wilson_interval(std::uint64_t k, std::uint64_t t, double z) {
  if (t == 0) return {0.0, 1.0};
  const double n = static_cast<double>(t);
  const double phat = static_cast<double>(k) / n;
  const double z2 = z * z;
  const double center = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {k == 0 ? 0.0 : std::max(0.0, center - half), k == t ? 1.0 : std::min(1.0, center + half)};
}

ProbabilityEstimate make_estimate(std::uint64_t successes, std::uint64_t trials) {
  ProbabilityEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  e.ci = wilson_interval(successes, trials);
  return e;
}

ProbabilityEstimate estimate_percolation_prob(const ERParams& params, std::uint64_t trials,
                                              SeedSpec seed, unsigned workers) {
  if (trials == 0) throw std::invalid_argument("estimate_percolation_prob: trials must be positive");
  const TrialBatch b = run_batch(params, trials, seed, workers);
  return make_estimate(b.successes(), trials);
}

double RatioPolicy::q_max() const { return kind == Kind::symmetric ? 1.0 : p1; }

ERParams RatioPolicy::at(Vertex n, double q) const {
  if (kind == Kind::symmetric) {
    const double p = std::sqrt(q);
    return {n, p, p};
  }
  return {n, p1, std::min(1.0, q / p1)};
}

std::string RatioPolicy::name() const {
  if (kind == Kind::symmetric) return "symmetric";
  char buf[64];
  std::snprintf(buf, sizeof buf, "fixed_p1=%.17g", p1);
  return buf;
}

ThresholdEstimate bisect_threshold(const std::function<ProbabilityEstimate(double, SeedSpec)>& probe,
                                   double x0, double x_max, SeedSpec seed,
                                   const ThresholdOptions& opts) {
  if (opts.trials_per_probe == 0) throw std::invalid_argument("threshold: trials_per_probe must be positive");
  if (!(opts.rel_tol > 0.0 && opts.rel_tol < 1.0)) {
    throw std::invalid_argument("threshold: rel_tol must lie in (0, 1)");
  }
  if (!(opts.target > 0.0 && opts.target < 1.0)) {
    throw std::invalid_argument("threshold: target must lie in (0, 1)");
  }
  if (!(x0 > 0.0 && x0 <= x_max)) throw std::invalid_argument("threshold: start point outside (0, x_max]");

  ThresholdEstimate out;
  out.target = opts.target;
  out.trials_per_probe = opts.trials_per_probe;
  out.rel_tol = opts.rel_tol;
  const double tp = static_cast<double>(opts.trials_per_probe);
  out.half_width_at_target = kZ95 * std::sqrt(opts.target * (1 - opts.target) / tp);
  if (opts.trials_per_probe == 1) {
    out.warnings.push_back("trials_per_probe = 1: every probe estimate is 0 or 1 and the 95% interval spans most of [0, 1]");
  }

  auto eval = [&](double x) {
    ProbabilityEstimate e = probe(x, seed);
    out.probes.push_back({x, e});
    return e.estimate;
  };

  double lo = 0, hi = 0, p_lo = 0, p_hi = 0;
  const double p0 = eval(x0);
  if (p0 >= opts.target) {
    hi = x0;
    p_hi = p0;
    for (int i = 0;; ++i) {
      if (i == opts.max_doublings) throw std::runtime_error("threshold: no bracket below the start point");
      const double x = hi / 2;
      const double p = eval(x);
      if (p < opts.target) {
        lo = x;
        p_lo = p;
        break;
      }
      hi = x;
      p_hi = p;
    }
  } else {
    lo = x0;
    p_lo = p0;
    for (int i = 0;; ++i) {
      if (i == opts.max_doublings || lo >= x_max) {
        throw std::runtime_error("threshold: no bracket above the start point");
      }
      const double x = std::min(2 * lo, x_max);
      const double p = eval(x);
      if (p >= opts.target) {
        hi = x;
        p_hi = p;
        break;
      }
      lo = x;
      p_lo = p;
    }
  }

  while ((hi - lo) / lo > opts.rel_tol) {
    const double mid = 0.5 * (lo + hi);
    const double p = eval(mid);
    if (p >= opts.target) {
      hi = mid;
      p_hi = p;
    } else {
      lo = mid;
      p_lo = p;
    }
  }
  out.x_lo = lo;
  out.x_hi = hi;
  out.p_lo = p_lo;
  out.p_hi = p_hi;
  out.x_hat = lo + (opts.target - p_lo) * (hi - lo) / (p_hi - p_lo);
  return out;
}

ThresholdEstimate estimate_critical_product(Vertex n, const RatioPolicy& policy, SeedSpec seed,
                                            const ThresholdOptions& opts) {
  if (n < 64) throw std::invalid_argument("estimate_critical_product: n must be at least 64");
  if (policy.kind == RatioPolicy::Kind::fixed_p1 && !(policy.p1 > 0.0 && policy.p1 <= 1.0)) {
    throw std::invalid_argument("estimate_critical_product: fixed p1 must lie in (0, 1]");
  }
  const double ln_n = std::log(static_cast<double>(n));
  const double q_max = policy.q_max();
  const double q0 = std::min(1.0 / (n * ln_n), q_max);
  auto probe = [&](double q, SeedSpec s) {
    return estimate_percolation_prob(policy.at(n, q), opts.trials_per_probe, s, opts.workers);
  };
  ThresholdEstimate e = bisect_threshold(probe, q0, q_max, seed, opts);
  e.n = n;
  e.variable = "q";
  e.policy = policy.name();
  return e;
}

ScalingRow make_scaling_row(Vertex n, double q_hat) {
  return {n, q_hat, n * q_hat * std::log(static_cast<double>(n))};
}

double normalized_spread(const std::vector<ScalingRow>& rows) {
  if (rows.empty()) return 1.0;
  auto [mn, mx] = std::minmax_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.normalized < b.normalized;
  });
  return mx->normalized / mn->normalized;
}

ScalingStudy scaling_study(const std::vector<Vertex>& ns, const RatioPolicy& policy, SeedSpec seed,
                           const ThresholdOptions& opts) {
  for (Vertex n : ns) {
    if (n < 64) throw std::invalid_argument("scaling_study: every n must be at least 64");
  }
  ScalingStudy s;
  for (Vertex n : ns) {
    s.estimates.push_back(estimate_critical_product(n, policy, seed.child(n), opts));
    s.rows.push_back(make_scaling_row(n, s.estimates.back().x_hat));
  }
  s.spread = normalized_spread(s.rows);
  return s;
}

namespace {

// Arcs of the n-cycle (positions 0..n-1) under merging. Clusters of the cycle
// puzzle are always arcs: a merge needs a blue edge, and blue edges only join
// cycle neighbours.
class ArcCycle {
 public:
  explicit ArcCycle(Vertex n) : n_(n), parent_(n), left_(n), size_(n, 1), arcs_(n) {
    for (Vertex i = 0; i < n; ++i) parent_[i] = left_[i] = i;
  }

  Vertex find(Vertex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  Vertex right_of(Vertex root) { return find((left_[root] + size_[root]) % n_); }
  Vertex left_of(Vertex root) { return find((left_[root] + n_ - 1) % n_); }
  Vertex size(Vertex root) const { return size_[root]; }
  Vertex left(Vertex root) const { return left_[root]; }
  Vertex arcs() const { return arcs_; }

  // `b` must be the right neighbour of `a`.
  Vertex merge(Vertex a, Vertex b) {
    const Vertex start = left_[a], total = size_[a] + size_[b];
    const Vertex z = size_[a] >= size_[b] ? a : b;
    parent_[a == z ? b : a] = z;
    left_[z] = start;
    size_[z] = total;
    --arcs_;
    return z;
  }

 private:
  Vertex n_;
  std::vector<Vertex> parent_, left_, size_;
  Vertex arcs_;
};

std::uint64_t pair_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Runs the arc process. `any_edge(arcs, a, b, unknown)` reports whether some red
// pair between neighbouring arcs a and b exists among the `unknown` pairs not
// yet known to be absent.
template <class AnyEdge>
bool run_arc_process(Vertex n, AnyEdge any_edge) {
  if (n <= 1) return true;
  ArcCycle arcs(n);
  std::unordered_map<std::uint64_t, std::uint64_t> absent;
  auto known = [&](Vertex a, Vertex b) {
    auto it = absent.find(pair_key(a, b));
    return it == absent.end() ? std::uint64_t{0} : it->second;
  };
  std::vector<Vertex> stack(n);
  for (Vertex i = 0; i < n; ++i) stack[i] = n - 1 - i;

  while (!stack.empty() && arcs.arcs() > 1) {
    const Vertex a = stack.back();
    stack.pop_back();
    if (arcs.find(a) != a) continue;
    const Vertex b = arcs.right_of(a);
    const std::uint64_t total = static_cast<std::uint64_t>(arcs.size(a)) * arcs.size(b);
    const std::uint64_t unknown = total - known(a, b);
    if (unknown == 0) continue;
    if (!any_edge(arcs, a, b, unknown)) {
      absent[pair_key(a, b)] = total;
      continue;
    }
    if (arcs.arcs() == 2) return true;
    // Knowledge about the outer neighbours carries over to the merged arc.
    const Vertex w = arcs.left_of(a), v = arcs.right_of(b);
    const std::uint64_t kw = known(w, a) + known(w, b);
    const std::uint64_t kv = known(v, a) + known(v, b);
    for (auto key : {pair_key(a, b), pair_key(w, a), pair_key(w, b), pair_key(v, a), pair_key(v, b)}) {
      absent.erase(key);
    }
    const Vertex z = arcs.merge(a, b);
    if (kw) absent[pair_key(w, z)] = kw;
    if (kv && v != w) absent[pair_key(v, z)] = kv;
    stack.push_back(w);
    stack.push_back(z);
  }
  return arcs.arcs() == 1;
}

}  // namespace

bool cycle_puzzle_trial(Vertex n, double p, SeedSpec seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("cycle_puzzle_trial: p outside [0, 1]");
  Rng rng(seed);
  const double log_q = std::log1p(-p);
  return run_arc_process(n, [&](ArcCycle&, Vertex, Vertex, std::uint64_t unknown) {
    // P(at least one of `unknown` independent pairs present)
    return rng.uniform() < -std::expm1(static_cast<double>(unknown) * log_q);
  });
}

bool cycle_puzzle_percolates(const Graph& red) {
  const Vertex n = red.n();
  return run_arc_process(n, [&](ArcCycle& arcs, Vertex a, Vertex b, std::uint64_t) {
    if (arcs.size(b) < arcs.size(a)) std::swap(a, b);
    for (Vertex i = 0; i < arcs.size(a); ++i) {
      const Vertex v = (arcs.left(a) + i) % n + 1;
      for (Vertex w : red.neighbors(v)) {
        if (arcs.find(w - 1) == b) return true;
      }
    }
    return false;
  });
}

ProbabilityEstimate estimate_cycle_prob(Vertex n, double p, std::uint64_t trials, SeedSpec seed,
                                        unsigned workers) {
  if (trials == 0) throw std::invalid_argument("estimate_cycle_prob: trials must be positive");
  const auto hits = parallel_map(trials, workers, [&](std::size_t i) {
    return static_cast<std::uint8_t>(cycle_puzzle_trial(n, p, seed.child(i)));
  });
  return make_estimate(static_cast<std::uint64_t>(std::count(hits.begin(), hits.end(), 1)), trials);
}

ThresholdEstimate cycle_puzzle_threshold(Vertex n, SeedSpec seed, const ThresholdOptions& opts) {
  if (n < 1024) throw std::invalid_argument("cycle_puzzle_threshold: n must be at least 1024");
  const double p0 = 1.0 / std::log(static_cast<double>(n));
  auto probe = [&](double p, SeedSpec s) {
    return estimate_cycle_prob(n, p, opts.trials_per_probe, s, opts.workers);
  };
  ThresholdEstimate e = bisect_threshold(probe, p0, 1.0, seed, opts);
  e.n = n;
  e.variable = "p";
  e.policy = "cycle";
  return e;
}

Quantiles nearest_rank_quantiles(std::vector<std::uint64_t> sample) {
  if (sample.empty()) throw std::invalid_argument("nearest_rank_quantiles: empty sample");
  std::sort(sample.begin(), sample.end());
  auto rank = [&](double q) {
    const auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sample.size())));
    return static_cast<double>(sample[std::max<std::size_t>(r, 1) - 1]);
  };
  return {static_cast<double>(sample.front()), rank(0.25), rank(0.5), rank(0.75),
          static_cast<double>(sample.back())};
}

ClusterStats cluster_stats(const ERParams& params, std::uint64_t trials, SeedSpec seed,
                           unsigned workers) {
  if (trials == 0) throw std::invalid_argument("cluster_stats: trials must be positive");
  const TrialBatch b = run_batch(params, trials, seed, workers);
  ClusterStats s;
  s.params = params;
  s.trials = trials;
  s.seed = seed;
  std::vector<std::uint64_t> largest, rounds;
  for (const auto& o : b.outcomes) {
    ++s.largest_hist[o.largest];
    ++s.rounds_hist[o.rounds];
    largest.push_back(o.largest);
    rounds.push_back(o.rounds);
  }
  s.largest = nearest_rank_quantiles(std::move(largest));
  s.rounds = nearest_rank_quantiles(std::move(rounds));
  s.percolation_fraction = static_cast<double>(b.successes()) / static_cast<double>(trials);
  return s;
}

}  // namespace jigsaw
