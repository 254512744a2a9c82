#pragma once

#include <cstdint>
#include <vector>

namespace jigsaw::bounds {

/// A probability or bound carried in natural-log space.
struct BoundValue {
  double log_value = 0.0;  // may be +inf (divergent) or -inf (zero)
  double value = 0.0;      // exp(log_value) clamped to [0, 1]
  /// The hypotheses of the source estimate hold at this point.
  bool hypotheses_hold = true;
  /// Geometric ratio >= 1: the bound is vacuous.
  bool divergent = false;
  /// A factor went non-positive; the value is pinned at 0.
  bool degenerate = false;
  /// Depends on a constant chosen here that the source leaves unspecified.
  bool artifact_constant = false;

  static BoundValue from_log(double log_value);
};

/// Summation over k = ceil(ln n) .. floor(2 ln n) of the expected number of
/// sets of size k carrying a red and a blue spanning tree, followed by its
/// successive relaxations.
struct PartIBound {
  std::uint32_t k_lo = 0;
  std::uint32_t k_hi = 0;
  /// sum C(n,k) k^(k-2) p1^(k-1) k^(k-2) p2^(k-1)
  BoundValue exact_sum;
  /// [0] (1/(p1 p2)) sum (e n k p1 p2)^k
  /// [1] (1/(p1 p2)) sum (2 e n p1 p2 ln n)^k
  /// [2] 2 e n ln n sum_{k >= k_lo} (2 e n p1 p2 ln n)^(k-1), closed form
  std::vector<BoundValue> chain;
  /// 2 e n p1 p2 ln n
  double ratio = 0.0;
};

/// Requires n >= 3 and p1, p2 in (0, 1]; throws std::invalid_argument otherwise.
PartIBound part_i_upper_bound(std::uint64_t n, double p1, double p2);

/// Lower bounds on the conditional probability that a 1-by-1 round survives
/// step t.
struct RoundStepBound {
  /// 1 - exp(-(n/5) p1 p2 t (1 - p2 t))
  BoundValue unconditional;
  /// (1/10) n p1 p2 t (1 - p2 t); hypotheses_hold iff n p1 p2 t <= 1.
  BoundValue small_t;
  bool t_in_range = true;  // 1 <= t <= ceil((ln n)^(3/2))
  bool k_in_range = true;  // k <= n / (2 (ln n)^(3/2))
};

RoundStepBound rkt_lower_bound(std::uint64_t n, double p1, double p2, std::uint64_t t,
                               std::uint64_t k = 1);

struct TrialBounds {
  BoundValue stage_a;  // n^(-4/c)
  BoundValue stage_b;  // exp(-3 e^(-1/6) / (1 - e^(-c / (6 ln n))))
};

TrialBounds trial_bounds(std::uint64_t n, double implied_c);

struct QtiBounds {
  BoundValue exact;  // 1 - (1 - p)^(x_t / 2)
  BoundValue lower;  // p x_t / 4 if p x_t < 2, else 1/2
};

QtiBounds qti_bounds(double p, std::uint64_t x_t);

/// Constant standing in for the unspecified Omega in the doubling estimate.
inline constexpr double kDoublingKappa = 1.0 / 8.0;

/// 1 - exp(-kappa c (ln n)^2), flagged artifact_constant.
BoundValue doubling_success_bound(std::uint64_t n, double implied_c,
                                  double kappa = kDoublingKappa);

/// 1 - 2 n (1 - min(p1, p2))^x: every outside vertex finds a red and a blue
/// edge into a set of size x (default ceil(n/16)).
BoundValue completion_success_bound(std::uint64_t n, double p1, double p2,
                                    std::uint64_t set_size = 0);

/// log C(n, k) summed term by term; exact to rounding for small k.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

}  // namespace jigsaw::bounds
