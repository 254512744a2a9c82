#include "jigsaw/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace jigsaw::bounds {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 - e^{-y}) for y >= 0.
double log_one_minus_exp_neg(double y) {
  if (y <= 0.0) return -kInf;
  return std::log(-std::expm1(-y));
}

double ln_checked(std::uint64_t n) {
  if (n < 3) throw std::invalid_argument("bounds: n must be at least 3");
  return std::log(static_cast<double>(n));
}

}  // namespace

BoundValue BoundValue::from_log(double log_value) {
  BoundValue b;
  b.log_value = log_value;
  b.value = std::isnan(log_value) ? 0.0 : std::clamp(std::exp(std::min(log_value, 0.0)), 0.0, 1.0);
  return b;
}

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -kInf;
  k = std::min(k, n - k);
  double s = 0.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    s += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
  }
  return s;
}

PartIBound part_i_upper_bound(std::uint64_t n, double p1, double p2) {
  const double ln_n = ln_checked(n);
  if (!(p1 > 0.0 && p1 <= 1.0 && p2 > 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("part_i_upper_bound: p1 and p2 must lie in (0, 1]");
  }
  const double nd = static_cast<double>(n);
  const double log_pp = std::log(p1) + std::log(p2);
  const double e = std::numbers::e;

  PartIBound out;
  out.k_lo = static_cast<std::uint32_t>(std::ceil(ln_n));
  out.k_hi = static_cast<std::uint32_t>(std::floor(2.0 * ln_n));
  out.ratio = 2.0 * e * nd * std::exp(log_pp) * ln_n;

  double exact = -kInf, binom_relaxed = -kInf, k_relaxed = -kInf;
  const double log_x = std::log(2.0 * e * nd * ln_n) + log_pp;
  for (std::uint32_t k = out.k_lo; k <= out.k_hi; ++k) {
    const double kd = k;
    // Two spanning-tree counts k^(k-2), one per color.
    exact = log_add(exact, log_binomial(n, k) + (2.0 * kd - 4.0) * std::log(kd) +
                               (kd - 1.0) * log_pp);
    binom_relaxed = log_add(binom_relaxed, kd * (1.0 + std::log(nd * kd) + log_pp));
    k_relaxed = log_add(k_relaxed, kd * log_x);
  }
  out.exact_sum = BoundValue::from_log(exact);
  out.chain.push_back(BoundValue::from_log(binom_relaxed - log_pp));
  out.chain.push_back(BoundValue::from_log(k_relaxed - log_pp));

  BoundValue tail;
  if (out.ratio < 1.0) {
    tail = BoundValue::from_log(std::log(2.0 * e * nd * ln_n) + (out.k_lo - 1.0) * log_x -
                                std::log1p(-out.ratio));
  } else {
    tail = BoundValue::from_log(kInf);
    tail.divergent = true;
  }
  out.chain.push_back(tail);
  return out;
}

RoundStepBound rkt_lower_bound(std::uint64_t n, double p1, double p2, std::uint64_t t,
                               std::uint64_t k) {
  const double ln_n = ln_checked(n);
  const double nd = static_cast<double>(n);
  const double td = static_cast<double>(t);
  const double t1 = std::ceil(std::pow(ln_n, 1.5));

  RoundStepBound out;
  out.t_in_range = t >= 1 && td <= t1;
  out.k_in_range = static_cast<double>(k) <= nd / (2.0 * std::pow(ln_n, 1.5));

  const double slack = 1.0 - p2 * td;
  const bool small_t = nd * p1 * p2 * td <= 1.0;
  if (slack <= 0.0) {
    out.unconditional = BoundValue::from_log(-kInf);
    out.unconditional.degenerate = true;
    out.small_t = out.unconditional;
  } else {
    const double x = p1 * p2 * td * slack;
    out.unconditional = BoundValue::from_log(log_one_minus_exp_neg(nd / 5.0 * x));
    out.small_t = BoundValue::from_log(std::log(nd * x / 10.0));
  }
  const bool hyps = out.t_in_range && out.k_in_range;
  out.unconditional.hypotheses_hold = hyps;
  out.small_t.hypotheses_hold = hyps && small_t;
  return out;
}

TrialBounds trial_bounds(std::uint64_t n, double implied_c) {
  const double ln_n = ln_checked(n);
  if (!(implied_c > 0.0)) throw std::invalid_argument("trial_bounds: implied_c must be positive");
  TrialBounds out;
  out.stage_a = BoundValue::from_log(-4.0 * ln_n / implied_c);
  const double denom = -std::expm1(-implied_c / (6.0 * ln_n));
  out.stage_b = BoundValue::from_log(-3.0 * std::exp(-1.0 / 6.0) / denom);
  return out;
}

QtiBounds qti_bounds(double p, std::uint64_t x_t) {
  if (x_t < 1) throw std::invalid_argument("qti_bounds: x_t must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("qti_bounds: p outside [0, 1]");
  const double x = static_cast<double>(x_t);
  QtiBounds out;
  // 1 - (1-p)^(x/2) = 1 - exp((x/2) log(1-p))
  out.exact = BoundValue::from_log(log_one_minus_exp_neg(-(x / 2.0) * std::log1p(-p)));
  out.lower = BoundValue::from_log(p * x < 2.0 ? std::log(p * x / 4.0) : std::log(0.5));
  return out;
}

BoundValue doubling_success_bound(std::uint64_t n, double implied_c, double kappa) {
  const double ln_n = ln_checked(n);
  BoundValue b = BoundValue::from_log(log_one_minus_exp_neg(kappa * implied_c * ln_n * ln_n));
  b.artifact_constant = true;
  return b;
}

BoundValue completion_success_bound(std::uint64_t n, double p1, double p2,
                                    std::uint64_t set_size) {
  ln_checked(n);
  const double nd = static_cast<double>(n);
  const double x = set_size == 0 ? std::ceil(nd / 16.0) : static_cast<double>(set_size);
  const double pmin = std::min(p1, p2);
  const double log_fail = std::log(2.0 * nd) + x * std::log1p(-pmin);
  if (log_fail >= 0.0) {
    BoundValue b = BoundValue::from_log(-kInf);
    b.degenerate = true;
    return b;
  }
  return BoundValue::from_log(std::log(-std::expm1(log_fail)));
}

}  // namespace jigsaw::bounds
