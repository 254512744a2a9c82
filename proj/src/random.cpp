#include "jigsaw/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jigsaw {

void ERParams::validate() const {
  if (n < 1) throw std::invalid_argument("ERParams: n must be at least 1");
  auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!ok(p1) || !ok(p2)) {
    throw std::invalid_argument("ERParams: probabilities must lie in [0, 1]");
  }
}

namespace {

std::uint64_t pair_count(Vertex n) {
  return static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("edge probability " + std::to_string(p) + " outside [0, 1]");
  }
}

Graph gen_er_skip(Vertex n, double p, SeedSpec seed) {
  Rng rng(seed);
  const std::uint64_t total = pair_count(n);
  const double log_q = std::log1p(-p);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.1) + 16);

  // Cursor over the lexicographic pair order: row u holds (u, u+1..n).
  Vertex u = 1;
  std::uint64_t row_start = 0;
  std::uint64_t idx = 0;  // index of the next candidate pair
  while (true) {
    const double skip = std::floor(std::log(rng.uniform_open()) / log_q);
    if (skip >= static_cast<double>(total - idx)) break;
    idx += static_cast<std::uint64_t>(skip);
    while (idx >= row_start + (n - u)) {
      row_start += n - u;
      ++u;
    }
    edges.emplace_back(u, static_cast<Vertex>(u + 1 + (idx - row_start)));
    if (++idx >= total) break;
  }
  return Graph::from_sorted_unique(n, std::move(edges));
}

}  // namespace

Graph gen_er_dense(Vertex n, double p, SeedSpec seed) {
  check_probability(p);
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex v = u + 1; v <= n; ++v) {
      if (rng.uniform() < p) edges.emplace_back(u, v);
    }
  }
  return Graph::from_sorted_unique(n, std::move(edges));
}

Graph gen_er(Vertex n, double p, SeedSpec seed) {
  check_probability(p);
  if (p == 0.0) return Graph(n);
  if (p == 1.0) return complete_graph(n);
  if (p <= kSkipSamplingCutoff) return gen_er_skip(n, p, seed);
  return gen_er_dense(n, p, seed);
}

DoubleGraph gen_double(const ERParams& params, SeedSpec seed) {
  params.validate();
  return {gen_er(params.n, params.p1, seed.child(0)), gen_er(params.n, params.p2, seed.child(1))};
}

Sprinkles gen_sprinkles(const ERParams& params, SeedSpec seed) {
  Sprinkles s;
  for (std::size_t j = 0; j < 3; ++j) {
    s.seeds[j] = seed.child(j + 1);
    s.draws[j] = gen_double(params, s.seeds[j]);
  }
  s.union12 = double_union(s.draws[0], s.draws[1]);
  s.union123 = double_union(s.union12, s.draws[2]);
  return s;
}

RegimeReport regime_check(const ERParams& params, double conn_constant) {
  params.validate();
  if (params.n < 3) throw std::invalid_argument("regime_check: n must be at least 3");
  const double n = params.n;
  const double ln_n = std::log(n);
  RegimeReport r;
  r.n = params.n;
  r.p1 = params.p1;
  r.p2 = params.p2;
  r.conn_constant = conn_constant;
  r.implied_c = params.p1 * params.p2 * n * ln_n;
  const double pmin = std::min(params.p1, params.p2);
  r.connectivity_ratio = pmin * n / ln_n;
  r.conds = r.implied_c * ln_n / n <= params.p1 && params.p1 <= params.p2;
  r.conds2_p1 = params.p1 <= 1.0 / std::sqrt(n);
  r.conds2_p2 = params.p2 <= 1.0 / (ln_n * ln_n);
  r.conn = r.connectivity_ratio >= conn_constant;
  return r;
}

}  // namespace jigsaw
