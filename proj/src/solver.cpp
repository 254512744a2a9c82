#include "jigsaw/solver.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace jigsaw {
namespace {

void sort_unique(std::vector<Edge>& edges) {
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// Splits a cluster graph (edges between representatives) into canonical merge
// records. `size_of` maps a representative to its cluster size.
template <class SizeOf>
void append_records(std::uint32_t round, std::vector<Edge> edges, SizeOf size_of,
                    std::vector<MergeRecord>& out) {
  sort_unique(edges);
  std::vector<Vertex> nodes;
  nodes.reserve(2 * edges.size());
  for (const auto& [a, b] : edges) {
    nodes.push_back(a);
    nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto index_of = [&](Vertex rep) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), rep) -
                                    nodes.begin());
  };

  std::vector<std::size_t> offsets(nodes.size() + 1, 0);
  for (const auto& [a, b] : edges) {
    ++offsets[index_of(a) + 1];
    ++offsets[index_of(b) + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::size_t> adj(offsets.back());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [a, b] : edges) {
    std::size_t i = index_of(a), j = index_of(b);
    adj[cursor[i]++] = j;
    adj[cursor[j]++] = i;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::sort(adj.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              adj.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
  }

  std::vector<std::int64_t> slot(nodes.size(), -1);
  for (std::size_t start = 0; start < nodes.size(); ++start) {
    if (slot[start] >= 0) continue;
    MergeRecord rec;
    rec.round = round;
    std::vector<std::size_t> order{start};
    slot[start] = 0;
    rec.parts.push_back(nodes[start]);
    rec.tree_parent.push_back(0);
    for (std::size_t head = 0; head < order.size(); ++head) {
      std::size_t cur = order[head];
      for (std::size_t e = offsets[cur]; e < offsets[cur + 1]; ++e) {
        std::size_t nb = adj[e];
        if (slot[nb] >= 0) continue;
        slot[nb] = static_cast<std::int64_t>(order.size());
        order.push_back(nb);
        rec.parts.push_back(nodes[nb]);
        rec.tree_parent.push_back(static_cast<std::uint32_t>(slot[cur]));
      }
    }
    for (Vertex rep : rec.parts) rec.size += size_of(rep);
    out.push_back(std::move(rec));
  }
}

}  // namespace

ClusterGraph build_cluster_graph(const DoubleGraph& dg, const Partition& clusters) {
  const Vertex n = dg.n();
  const std::vector<Vertex> label = clusters.min_labels();
  ClusterGraph cg;
  for (Vertex v = 1; v <= n; ++v) {
    if (label[v] == v) cg.nodes.push_back(v);
  }
  const std::size_t k = cg.nodes.size();
  std::vector<std::size_t> index(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < k; ++i) index[cg.nodes[i]] = i;

  // meets[i*k + j]: some edge of the color intersects both cluster i and j.
  auto meets = [&](const Graph& g) {
    std::vector<char> m(k * k, 0);
    for (const auto& [u, v] : g.edges()) {
      std::size_t i = index[label[u]], j = index[label[v]];
      if (i == j) continue;
      m[i * k + j] = 1;
      m[j * k + i] = 1;
    }
    return m;
  };
  const auto red = meets(dg.red);
  const auto blue = meets(dg.blue);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (red[i * k + j] && blue[i * k + j]) cg.edges.emplace_back(cg.nodes[i], cg.nodes[j]);
    }
  }
  return cg;
}

SolveResult solve_reference(const DoubleGraph& dg, SolveOptions opts) {
  const Vertex n = dg.n();
  SolveResult res{Partition(n), 0, {n}, {}};
  Partition& cur = res.final;
  while (cur.cluster_count() > 1) {
    ClusterGraph cg = build_cluster_graph(dg, cur);
    if (cg.edges.empty()) break;

    // Components of the cluster graph by breadth-first search.
    const std::size_t k = cg.nodes.size();
    std::vector<std::vector<std::size_t>> adj(k);
    auto idx = [&](Vertex rep) {
      return static_cast<std::size_t>(std::lower_bound(cg.nodes.begin(), cg.nodes.end(), rep) -
                                      cg.nodes.begin());
    };
    for (const auto& [a, b] : cg.edges) {
      adj[idx(a)].push_back(idx(b));
      adj[idx(b)].push_back(idx(a));
    }
    if (opts.record_trace) {
      append_records(res.rounds, cg.edges, [&](Vertex rep) { return cur.size_of(rep); },
                     res.merge_trace);
    }
    std::vector<char> seen(k, 0);
    std::vector<std::pair<Vertex, Vertex>> joins;
    for (std::size_t s = 0; s < k; ++s) {
      if (seen[s]) continue;
      seen[s] = 1;
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        std::size_t c = stack.back();
        stack.pop_back();
        for (std::size_t nb : adj[c]) {
          if (seen[nb]) continue;
          seen[nb] = 1;
          joins.emplace_back(cg.nodes[s], cg.nodes[nb]);
          stack.push_back(nb);
        }
      }
    }
    for (const auto& [a, b] : joins) cur.unite(a, b);
    ++res.rounds;
    res.cluster_counts.push_back(cur.cluster_count());
  }
  return res;
}

SolveResult solve_fast(const DoubleGraph& dg, SolveOptions opts) {
  const Vertex n = dg.n();
  SolveResult res{Partition(n), 0, {n}, {}};
  if (n <= 1) return res;
  Partition& part = res.final;

  const std::size_t sz = static_cast<std::size_t>(n) + 1;
  std::vector<Vertex> next(sz);  // circular member list per cluster
  std::iota(next.begin(), next.end(), Vertex{0});
  std::vector<Vertex> min_member(sz);
  std::iota(min_member.begin(), min_member.end(), Vertex{0});
  std::vector<std::uint32_t> red_mark(sz, 0), emit_mark(sz, 0), touch_mark(sz, 0);
  std::uint32_t stamp = 0;

  // Round 0: singletons are joined exactly by edges present in both colors.
  std::vector<Edge> gamma;
  std::set_intersection(dg.red.edges().begin(), dg.red.edges().end(), dg.blue.edges().begin(),
                        dg.blue.edges().end(), std::back_inserter(gamma));

  std::vector<Vertex> touched;
  while (!gamma.empty()) {
    if (opts.record_trace) {
      std::vector<Edge> reps;
      reps.reserve(gamma.size());
      for (const auto& [a, b] : gamma) reps.emplace_back(min_member[a], min_member[b]);
      append_records(res.rounds, std::move(reps),
                     [&](Vertex rep) { return part.size_of(rep); }, res.merge_trace);
    }
    for (const auto& [a, b] : gamma) {
      Vertex ra = part.find(a), rb = part.find(b);
      if (ra == rb) continue;
      const Vertex lo = std::min(min_member[ra], min_member[rb]);
      part.unite(ra, rb);
      std::swap(next[ra], next[rb]);
      min_member[part.find(ra)] = lo;
    }
    ++res.rounds;
    res.cluster_counts.push_back(part.cluster_count());
    if (part.cluster_count() == 1) break;

    ++stamp;
    touched.clear();
    for (const auto& [a, b] : gamma) {
      Vertex r = part.find(a);
      if (touch_mark[r] != stamp) {
        touch_mark[r] = stamp;
        touched.push_back(r);
      }
    }

    gamma.clear();
    for (Vertex t : touched) {
      ++stamp;
      Vertex u = t;
      do {
        for (Vertex w : dg.red.neighbors(u)) {
          Vertex r = part.find(w);
          if (r != t) red_mark[r] = stamp;
        }
        u = next[u];
      } while (u != t);
      do {
        for (Vertex w : dg.blue.neighbors(u)) {
          Vertex r = part.find(w);
          if (r != t && red_mark[r] == stamp && emit_mark[r] != stamp) {
            emit_mark[r] = stamp;
            gamma.emplace_back(std::min(t, r), std::max(t, r));
          }
        }
        u = next[u];
      } while (u != t);
    }
    sort_unique(gamma);
  }
  return res;
}

bool percolates(const DoubleGraph& dg) {
  return solve_fast(dg, {.record_trace = false}).percolates();
}

bool is_internally_spanned(const DoubleGraph& dg, std::span<const Vertex> subset) {
  if (subset.empty()) throw std::invalid_argument("is_internally_spanned: empty vertex subset");
  return percolates(induce(dg, subset).graph);
}

std::vector<std::vector<std::vector<Vertex>>> replay_parts(Vertex n,
                                                           std::span<const MergeRecord> trace) {
  Partition replay(n);
  std::vector<std::vector<Vertex>> members(static_cast<std::size_t>(n) + 1);
  for (Vertex v = 1; v <= n; ++v) members[v] = {v};
  std::vector<std::vector<std::vector<Vertex>>> out;
  out.reserve(trace.size());
  for (const MergeRecord& rec : trace) {
    auto& parts = out.emplace_back();
    for (Vertex rep : rec.parts) parts.push_back(members[replay.find(rep)]);
    for (std::size_t i = 1; i < rec.parts.size(); ++i) {
      Vertex ra = replay.find(rec.parts[0]), rb = replay.find(rec.parts[i]);
      replay.unite(ra, rb);
      Vertex root = replay.find(ra);
      Vertex other = root == ra ? rb : ra;
      auto& dst = members[root];
      dst.insert(dst.end(), members[other].begin(), members[other].end());
      members[other].clear();
      members[other].shrink_to_fit();
    }
  }
  return out;
}

std::optional<SpannedWitness> spanned_witness_from_history(const DoubleGraph& dg, Vertex m) {
  const Vertex n = dg.n();
  if (m < 1 || m > n) {
    throw std::invalid_argument("spanned_witness_from_history: m must lie in 1..n");
  }
  if (m == 1) return SpannedWitness{{1}};

  const SolveResult res = solve_fast(dg);
  const auto parts = replay_parts(n, res.merge_trace);
  std::optional<SpannedWitness> best;
  for (const auto& rec_parts : parts) {
    std::vector<Vertex> acc;
    for (const auto& p : rec_parts) {
      acc.insert(acc.end(), p.begin(), p.end());
      if (acc.size() >= m) {
        if (!best || acc.size() < best->size()) {
          best = SpannedWitness{acc};
          std::sort(best->vertices.begin(), best->vertices.end());
        }
        break;
      }
    }
  }
  return best;
}

std::optional<SpannedWitness> exhaustive_spanned(const DoubleGraph& dg, Vertex m) {
  const Vertex n = dg.n();
  if (n > kExhaustiveMaxVertices) {
    throw std::invalid_argument("exhaustive_spanned: n = " + std::to_string(n) +
                                " exceeds the limit of " +
                                std::to_string(kExhaustiveMaxVertices));
  }
  if (m < 1 || m > n) throw std::invalid_argument("exhaustive_spanned: m must lie in 1..n");
  std::vector<Vertex> subset;
  for (Vertex size = m; size <= n; ++size) {
    subset.resize(size);
    std::iota(subset.begin(), subset.end(), Vertex{1});
    while (true) {
      if (is_internally_spanned(dg, subset)) return SpannedWitness{subset};
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && subset[i - 1] == n - size + i) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < size; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  return std::nullopt;
}

Partition mutually_connected_clusters(const DoubleGraph& dg) {
  const Vertex n = dg.n();
  std::vector<Vertex> label(static_cast<std::size_t>(n) + 1, 1);
  Vertex blocks = n == 0 ? 0 : 1;

  // Splits every block into the components of `g` restricted to the block.
  auto refine = [&](const Graph& g) {
    Partition p(n);
    for (const auto& [u, v] : g.edges()) {
      if (label[u] == label[v]) p.unite(u, v);
    }
    label = p.min_labels();
    return p.cluster_count();
  };

  while (true) {
    refine(dg.red);
    Vertex after = refine(dg.blue);
    if (after == blocks) break;
    blocks = after;
  }
  Partition out(n);
  for (Vertex v = 1; v <= n; ++v) out.unite(v, label[v]);
  return out;
}

}  // namespace jigsaw
