#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "jigsaw/graph.hpp"

namespace jigsaw {

/// SplitMix64 finalizer: a bijective 64-bit avalanche mixer.
constexpr std::uint64_t avalanche64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Stream seed derivation: avalanche64(master ^ avalanche64(stream)).
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  return avalanche64(master ^ avalanche64(stream));
}

/// A master seed plus a stream id. Streams nest: child(k) uses this spec's
/// derived value as the master of stream k.
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  constexpr std::uint64_t value() const { return mix_seed(master, stream); }
  constexpr SeedSpec child(std::uint64_t sub) const { return {value(), sub}; }

  friend constexpr bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Portable uniform variates on top of std::mt19937_64 (whose output sequence
/// is fixed by the standard; the std distributions are not).
class Rng {
 public:
  explicit Rng(SeedSpec seed) : engine_(seed.value()) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct ERParams {
  Vertex n = 1;
  double p1 = 0.0;  // red
  double p2 = 0.0;  // blue

  /// Throws std::invalid_argument unless n >= 1 and both probabilities lie in [0, 1].
  void validate() const;
};

/// Probabilities at or below this use geometric skip sampling.
inline constexpr double kSkipSamplingCutoff = 0.1;

/// G(n, p): each of the n(n-1)/2 pairs independently with probability p.
/// Sparse p walks the lexicographic pair order with geometric skips.
Graph gen_er(Vertex n, double p, SeedSpec seed);

/// G(n, p) by one uniform per pair in lexicographic order, keeping a pair iff
/// its uniform is below p. For a fixed seed the edge set is monotone in p.
Graph gen_er_dense(Vertex n, double p, SeedSpec seed);

/// Red from seed.child(0), blue from seed.child(1).
DoubleGraph gen_double(const ERParams& params, SeedSpec seed);

/// Three independent draws (draw j from seed.child(j + 1)) and their unions.
struct Sprinkles {
  std::array<DoubleGraph, 3> draws;
  std::array<SeedSpec, 3> seeds;
  DoubleGraph union12;
  DoubleGraph union123;
};

Sprinkles gen_sprinkles(const ERParams& params, SeedSpec seed);

/// Where a parameter point sits relative to the regime conditions, with
/// c := p1 p2 n ln n.
struct RegimeReport {
  Vertex n = 0;
  double p1 = 0.0;
  double p2 = 0.0;
  double implied_c = 0.0;
  /// min(p1, p2) n / ln n.
  double connectivity_ratio = 0.0;
  double conn_constant = 1.0;
  /// c ln n / n <= p1 <= p2 (the product form holds by definition of c).
  bool conds = false;
  bool conds2_p1 = false;  // p1 <= n^(-1/2)
  bool conds2_p2 = false;  // p2 <= 1 / (ln n)^2
  /// min(p1, p2) >= conn_constant * ln n / n.
  bool conn = false;

  bool conds2() const { return conds2_p1 && conds2_p2; }
};

/// Requires n >= 3; throws std::invalid_argument otherwise.
RegimeReport regime_check(const ERParams& params, double conn_constant = 1.0);

}  // namespace jigsaw
