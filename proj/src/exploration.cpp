#include "jigsaw/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace jigsaw {
namespace {

const Graph& layer_of(const DoubleGraph& g, Color c) { return c == Color::red ? g.red : g.blue; }

// Marks every vertex of `set`, rejecting labels outside [1, n] and repeats.
std::vector<char> membership(Vertex n, std::span<const Vertex> set, const char* who) {
  std::vector<char> in(n + 1, 0);
  for (Vertex v : set) {
    if (v < 1 || v > n) throw std::invalid_argument(std::string(who) + ": vertex out of range");
    if (in[v]) throw std::invalid_argument(std::string(who) + ": repeated vertex");
    in[v] = 1;
  }
  return in;
}

}  // namespace

RevealLedger::RevealLedger(Vertex n) : n_(n), dense_(n <= kDenseMaxVertices) {
  if (dense_) {
    const std::size_t pairs = static_cast<std::size_t>(n) * (n - (n > 0 ? 1 : 0)) / 2;
    bits_[0].assign(pairs, false);
    bits_[1].assign(pairs, false);
  }
}

std::uint64_t RevealLedger::key(Vertex u, Vertex v) const {
  if (u > v) std::swap(u, v);
  if (u < 1 || v > n_ || u == v) throw std::invalid_argument("RevealLedger: invalid pair");
  if (dense_) {
    // Row-major lower triangle: pairs (u, v) with u < v.
    return static_cast<std::uint64_t>(v - 1) * (v - 2) / 2 + (u - 1);
  }
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

void RevealLedger::record(Color color, Vertex u, Vertex v) {
  const std::uint64_t k = key(u, v);
  const std::size_t c = index(color);
  bool fresh;
  if (dense_) {
    fresh = !bits_[c][k];
    bits_[c][k] = true;
  } else {
    fresh = sparse_[c].insert(k).second;
  }
  ++queries_;
  ++per_color_[c];
  if (!fresh) ++repeats_;
}

bool RevealLedger::reveal(const DoubleGraph& g, Color color, Vertex u, Vertex v) {
  record(color, u, v);
  return layer_of(g, color).has_edge(u, v);
}

bool RevealLedger::seen(Color color, Vertex u, Vertex v) const {
  const std::uint64_t k = key(u, v);
  const std::size_t c = index(color);
  return dense_ ? static_cast<bool>(bits_[c][k]) : sparse_[c].contains(k);
}

ExplorationParams exploration_params(Vertex n, double implied_c) {
  if (n < 3) throw std::invalid_argument("exploration_params: n must be at least 3");
  const double ln_n = std::log(static_cast<double>(n));
  const double l15 = std::pow(ln_n, 1.5);
  ExplorationParams p;
  p.t1 = static_cast<std::uint32_t>(std::ceil(l15));
  p.k_cap = static_cast<std::uint32_t>(std::floor(n / (2.0 * l15)));
  if (implied_c > 0.0) {
    const double t0 = std::ceil(ln_n / implied_c);
    p.t0 = static_cast<std::uint32_t>(std::clamp(t0, 1.0, static_cast<double>(p.t1)));
  } else {
    p.t0 = p.t1;
  }
  return p;
}

OneByOneResult one_by_one(const DoubleGraph& g1, const ExplorationParams& params) {
  const Vertex n = g1.n();
  if (params.k_cap < 1 || params.t1 < 1) {
    throw std::invalid_argument("one_by_one: t1 and k_cap must be positive");
  }
  enum State : char { kActive, kTrial, kRoundDiscarded, kGone };
  std::vector<char> state(n + 1, kActive);
  std::vector<std::uint32_t> red_mark(n + 1, 0);
  std::uint32_t stamp = 0;

  OneByOneResult out;
  out.ledger = RevealLedger(n);
  std::vector<Vertex> active, reds, blues;

  for (std::uint32_t k = 1;; ++k) {
    // A_k: everything not permanently discarded.
    active.clear();
    for (Vertex v = 1; v <= n; ++v) {
      if (state[v] == kRoundDiscarded) state[v] = kActive;
      if (state[v] == kActive) active.push_back(v);
    }
    const Vertex a_k = static_cast<Vertex>(active.size());
    if (2 * static_cast<std::uint64_t>(a_k) < n) {
      throw std::logic_error("one_by_one: round " + std::to_string(k) +
                             " starts with fewer than n/2 active vertices");
    }
    OneByOneRound round;
    round.k = k;
    round.active_at_start = a_k;

    round.trial.push_back(active.front());
    state[active.front()] = kTrial;
    active.erase(active.begin());
    Vertex discarded = 0;
    Vertex max_red = 0;

    for (std::uint32_t t = 1;; ++t) {
      if (round.trial.size() + active.size() + discarded != a_k) {
        throw std::logic_error("one_by_one: trial, active and discarded sets do not partition A_k");
      }
      const Vertex newest = round.trial.back();
      ++stamp;
      for (Vertex w : g1.red.neighbors(newest)) red_mark[w] = stamp;
      reds.clear();
      for (Vertex v : active) {
        out.ledger.record(Color::red, v, newest);
        if (red_mark[v] == stamp) reds.push_back(v);
      }
      blues.clear();
      for (Vertex r : reds) {
        bool hit = false;
        for (Vertex x : round.trial) hit = out.ledger.reveal(g1, Color::blue, r, x) || hit;
        if (hit) blues.push_back(r);
      }

      OneByOneStep step;
      step.t = t;
      step.red_hits = static_cast<Vertex>(reds.size());
      step.blue_hits = static_cast<Vertex>(blues.size());
      max_red = std::max(max_red, step.red_hits);
      step.s_event = max_red <= n / (4 * static_cast<std::uint64_t>(t));
      round.final_t = t;

      if (blues.empty()) {
        round.steps.push_back(step);
        break;
      }
      step.added = blues.front();
      round.steps.push_back(step);
      for (Vertex r : reds) state[r] = kRoundDiscarded;
      state[step.added] = kTrial;
      discarded += step.red_hits - 1;
      round.trial.push_back(step.added);
      std::erase_if(active, [&](Vertex v) { return state[v] != kActive; });

      if (t >= params.t1) {
        round.stopped_at_t1 = true;
        break;
      }
    }

    const bool done = round.stopped_at_t1;
    for (Vertex x : round.trial) state[x] = kGone;
    out.rounds.push_back(std::move(round));
    if (done) {
      SpannedWitness w;
      w.vertices = out.rounds.back().trial;
      std::sort(w.vertices.begin(), w.vertices.end());
      out.witness = std::move(w);
      return out;
    }
    if (k >= params.k_cap) return out;
  }
}

DoublingResult doubling(const DoubleGraph& g12, const DoubleGraph& g2_only,
                        std::span<const Vertex> x0) {
  const Vertex n = g12.n();
  if (g2_only.n() != n) throw std::invalid_argument("doubling: vertex counts differ");
  if (x0.empty()) throw std::invalid_argument("doubling: empty seed set");
  std::vector<char> in_x = membership(n, x0, "doubling");
  if (!is_internally_spanned(g12, x0)) {
    throw std::invalid_argument("doubling: seed set is not internally spanned");
  }
  const Vertex target = (n + 15) / 16;

  DoublingResult out;
  out.ledger = RevealLedger(n);
  std::vector<Vertex> x(x0.begin(), x0.end());
  std::sort(x.begin(), x.end());
  std::vector<Vertex> layer = x;
  std::vector<char> red_hit(n + 1), blue_hit(n + 1);

  for (std::uint32_t t = 0; x.size() < target; ++t) {
    std::vector<Vertex> active;
    for (Vertex v = 1; v <= n; ++v) {
      if (!in_x[v]) active.push_back(v);
    }
    std::fill(red_hit.begin(), red_hit.end(), 0);
    std::fill(blue_hit.begin(), blue_hit.end(), 0);
    for (Vertex w : layer) {
      for (Vertex u : g2_only.red.neighbors(w)) red_hit[u] = 1;
      for (Vertex u : g2_only.blue.neighbors(w)) blue_hit[u] = 1;
    }
    std::vector<Vertex> candidates;
    for (Vertex v : active) {
      for (Vertex w : layer) {
        out.ledger.record(Color::red, v, w);
        out.ledger.record(Color::blue, v, w);
      }
      if (red_hit[v] && blue_hit[v]) candidates.push_back(v);
    }

    DoublingStep step;
    step.t = t;
    step.trial_size = static_cast<Vertex>(x.size());
    step.layer_size = static_cast<Vertex>(layer.size());
    step.active = static_cast<Vertex>(active.size());
    step.candidates = static_cast<Vertex>(candidates.size());
    if (candidates.size() <= x.size()) {
      out.steps.push_back(std::move(step));
      return out;
    }
    candidates.resize(x.size());
    step.chosen = candidates;
    out.steps.push_back(std::move(step));
    for (Vertex v : candidates) in_x[v] = 1;
    layer = std::move(candidates);
    x.insert(x.end(), layer.begin(), layer.end());
    std::sort(x.begin(), x.end());
  }
  out.spanned = std::move(x);
  return out;
}

bool third_sprinkle_completion(std::span<const Vertex> x, const DoubleGraph& g3) {
  const Vertex n = g3.n();
  std::vector<char> in_x = membership(n, x, "third_sprinkle_completion");
  if (x.size() < (n + 15) / 16) {
    throw std::invalid_argument("third_sprinkle_completion: set smaller than ceil(n/16)");
  }
  auto touches = [&](const Graph& g, Vertex v) {
    for (Vertex w : g.neighbors(v)) {
      if (in_x[w]) return true;
    }
    return false;
  };
  for (Vertex v = 1; v <= n; ++v) {
    if (in_x[v]) continue;
    if (!touches(g3.red, v) || !touches(g3.blue, v)) return false;
  }
  return true;
}

PercolationCertificate run_three_stage(const ERParams& params, SeedSpec seed) {
  params.validate();
  PercolationCertificate cert;
  cert.params = params;
  cert.seed = seed;
  cert.regime = regime_check(params);
  cert.exploration = exploration_params(params.n, cert.regime.implied_c);

  const Sprinkles s = gen_sprinkles(params, seed);
  cert.sprinkle_seeds = s.seeds;

  cert.stage1 = one_by_one(s.draws[0], cert.exploration);
  if (!cert.stage1.witness) return cert;
  cert.stage1_spanned = is_internally_spanned(s.draws[0], cert.stage1.witness->vertices);

  // Every prefix of the trial order is internally spanned; the doubling seed
  // is the first t1 of them.
  const auto& order = *cert.stage1.trial_order();
  std::vector<Vertex> x0(order.begin(), order.begin() + cert.exploration.t1);
  std::sort(x0.begin(), x0.end());
  cert.stage2 = doubling(s.union12, s.draws[1], x0);
  if (!cert.stage2->spanned) return cert;
  cert.stage2_spanned = is_internally_spanned(s.union12, *cert.stage2->spanned);

  cert.stage3 = third_sprinkle_completion(*cert.stage2->spanned, s.draws[2]);
  if (*cert.stage3) cert.union_percolates = percolates(s.union123);
  return cert;
}

}  // namespace jigsaw
