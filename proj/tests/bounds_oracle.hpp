#pragma once

// High-precision reference for the part-(i) sum: linear-space summation with
// 50 significant digits, no logarithms or relaxations involved.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>

namespace jigsaw::testing {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

struct PartISum {
  std::uint32_t k_lo = 0;
  std::uint32_t k_hi = 0;
  HighPrecision sum = 0;
};

inline PartISum part_i_sum_oracle(std::uint64_t n, double p1, double p2) {
  using boost::multiprecision::ceil;
  using boost::multiprecision::floor;
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  const HighPrecision ln_n = log(HighPrecision(n));
  PartISum out;
  out.k_lo = static_cast<std::uint32_t>(ceil(ln_n));
  out.k_hi = static_cast<std::uint32_t>(floor(2 * ln_n));
  const HighPrecision pp = HighPrecision(p1) * HighPrecision(p2);
  for (std::uint32_t k = out.k_lo; k <= out.k_hi; ++k) {
    HighPrecision binom = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      binom *= HighPrecision(n - i);
      binom /= HighPrecision(i + 1);
    }
    const HighPrecision trees = pow(HighPrecision(k), static_cast<int>(k) - 2);
    out.sum += binom * trees * trees * pow(pp, static_cast<int>(k) - 1);
  }
  return out;
}

}  // namespace jigsaw::testing
