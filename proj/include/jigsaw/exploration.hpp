#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "jigsaw/graph.hpp"
#include "jigsaw/random.hpp"
#include "jigsaw/solver.hpp"

namespace jigsaw {

enum class Color : std::uint8_t { red = 0, blue = 1 };

/// Record of every (color, pair) test made against one sprinkle. A repeated
/// query is counted, never thrown, so callers can assert on `repeats()`.
class RevealLedger {
 public:
  /// Pairs are tracked in a bit vector up to this many vertices, in a hash
  /// set beyond it.
  static constexpr Vertex kDenseMaxVertices = 16384;

  RevealLedger() = default;
  explicit RevealLedger(Vertex n);

  /// Registers a test of the pair {u, v} in `color`.
  void record(Color color, Vertex u, Vertex v);
  /// Tests and records in one go.
  bool reveal(const DoubleGraph& g, Color color, Vertex u, Vertex v);

  bool seen(Color color, Vertex u, Vertex v) const;
  std::uint64_t queries() const { return queries_; }
  std::uint64_t queries(Color color) const { return per_color_[index(color)]; }
  std::uint64_t repeats() const { return repeats_; }

 private:
  static std::size_t index(Color c) { return static_cast<std::size_t>(c); }
  std::uint64_t key(Vertex u, Vertex v) const;

  Vertex n_ = 0;
  bool dense_ = true;
  std::vector<bool> bits_[2];
  std::unordered_set<std::uint64_t> sparse_[2];
  std::uint64_t queries_ = 0;
  std::uint64_t per_color_[2] = {0, 0};
  std::uint64_t repeats_ = 0;
};

struct ExplorationParams {
  /// ceil(ln n / c), clamped to [1, t1]; equal to t1 when c <= 0.
  std::uint32_t t0 = 1;
  /// ceil((ln n)^(3/2)): stage-1 stop threshold and doubling seed size.
  std::uint32_t t1 = 1;
  /// floor(n / (2 (ln n)^(3/2))): most rounds of stage 1.
  std::uint32_t k_cap = 1;
};

/// Requires n >= 3; throws std::invalid_argument otherwise.
ExplorationParams exploration_params(Vertex n, double implied_c);

struct OneByOneStep {
  std::uint32_t t = 0;
  Vertex red_hits = 0;   // |R_k^t|
  Vertex blue_hits = 0;  // |B_k^t|
  Vertex added = 0;      // x_k^{t+1}, or 0 when B_k^t is empty
  /// |R_k^s| <= floor(n / (4t)) for every s <= t.
  bool s_event = true;
};

struct OneByOneRound {
  std::uint32_t k = 0;
  Vertex active_at_start = 0;  // |A_k|
  std::uint32_t final_t = 0;
  std::vector<Vertex> trial;   // x_k^1, x_k^2, ... in insertion order
  std::vector<OneByOneStep> steps;
  bool stopped_at_t1 = false;
};

struct OneByOneResult {
  /// The final trial set of a successful round (size t1 + 1), ascending.
  std::optional<SpannedWitness> witness;
  std::vector<OneByOneRound> rounds;
  RevealLedger ledger;

  /// The successful round's trial vertices in insertion order.
  const std::vector<Vertex>* trial_order() const {
    return witness ? &rounds.back().trial : nullptr;
  }
};

/// Stage 1 on the first sprinkle. Ties go to the smallest label. Throws
/// std::logic_error if a round starts with fewer than n/2 active vertices.
OneByOneResult one_by_one(const DoubleGraph& g1, const ExplorationParams& params);

struct DoublingStep {
  std::uint32_t t = 0;
  Vertex trial_size = 0;  // x_t
  Vertex layer_size = 0;  // |X_t \ X_{t-1}|
  Vertex active = 0;      // |A_t|
  Vertex candidates = 0;  // |B_t|
  std::vector<Vertex> chosen;  // C_t, ascending; empty on the stopping step
};

struct DoublingResult {
  std::optional<std::vector<Vertex>> spanned;  // ascending, size >= ceil(n/16)
  std::vector<DoublingStep> steps;
  RevealLedger ledger;
};

/// Stage 2. `x0` must be internally spanned in `g12`; throws
/// std::invalid_argument otherwise. Only `g2_only` edges are revealed.
DoublingResult doubling(const DoubleGraph& g12, const DoubleGraph& g2_only,
                        std::span<const Vertex> x0);

/// Every vertex outside `x` has a red and a blue `g3` edge into `x`. Throws
/// std::invalid_argument unless `x` holds at least ceil(n/16) distinct valid
/// vertices.
bool third_sprinkle_completion(std::span<const Vertex> x, const DoubleGraph& g3);

struct PercolationCertificate {
  ERParams params;
  SeedSpec seed;
  RegimeReport regime;
  ExplorationParams exploration;
  std::array<SeedSpec, 3> sprinkle_seeds{};

  OneByOneResult stage1;
  std::optional<DoublingResult> stage2;  // absent when stage 1 failed
  std::optional<bool> stage3;            // absent when stage 2 failed

  /// Solver checks: stage-1 witness in sprinkle 1, stage-2 set in sprinkles
  /// 1 and 2, and the union of all three on full success.
  std::optional<bool> stage1_spanned;
  std::optional<bool> stage2_spanned;
  std::optional<bool> union_percolates;

  bool success() const { return stage3.value_or(false); }
};

/// Draws the three sprinkles from `seed` and runs the stages in order. Needs
/// n >= 3. The regime is reported, not enforced.
PercolationCertificate run_three_stage(const ERParams& params, SeedSpec seed);

}  // namespace jigsaw
