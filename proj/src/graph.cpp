#include "jigsaw/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace jigsaw {

Graph::Graph(Vertex n) : n_(n) { build_adjacency(); }

Graph::Graph(Vertex n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  for (auto& [u, v] : edges_) {
    if (u < 1 || v < 1 || u > n_ || v > n_) {
      throw std::invalid_argument("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                  "} has an endpoint outside 1.." + std::to_string(n_));
    }
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw std::invalid_argument("duplicate edge {" + std::to_string(dup->first) + "," +
                                std::to_string(dup->second) + "}");
  }
  build_adjacency();
}

Graph Graph::from_sorted_unique(Vertex n, std::vector<Edge> edges) {
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.build_adjacency();
  return g;
}

void Graph::build_adjacency() {
  offsets_.assign(static_cast<std::size_t>(n_) + 2, 0);
  for (const auto& [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adj_.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Lexicographic edge order yields sorted lists: every (u, w) with u < w
  // precedes every (w, v).
  for (const auto& [u, v] : edges_) {
    adj_[cursor[u]++] = v;
    adj_[cursor[v]++] = u;
  }
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u < 1 || v < 1 || u > n_ || v > n_ || u == v) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

DoubleGraph::DoubleGraph(Graph r, Graph b) : red(std::move(r)), blue(std::move(b)) {
  if (red.n() != blue.n()) {
    throw std::invalid_argument("red and blue graphs have different vertex counts");
  }
}

Partition::Partition(Vertex n)
    : n_(n), clusters_(n), parent_(static_cast<std::size_t>(n) + 1),
      rank_(static_cast<std::size_t>(n) + 1, 0), size_(static_cast<std::size_t>(n) + 1, 1) {
  std::iota(parent_.begin(), parent_.end(), Vertex{0});
}

Vertex Partition::find(Vertex v) const {
  Vertex root = v;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[v] != root) {
    Vertex next = parent_[v];
    parent_[v] = root;
    v = next;
  }
  return root;
}

bool Partition::unite(Vertex u, Vertex v) {
  Vertex a = find(u);
  Vertex b = find(v);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  if (rank_[a] == rank_[b]) ++rank_[a];
  --clusters_;
  return true;
}

Vertex Partition::largest_block() const {
  Vertex best = 0;
  for (Vertex v = 1; v <= n_; ++v) {
    if (parent_[v] == v) best = std::max(best, size_[v]);
  }
  return best;
}

std::vector<Vertex> Partition::min_labels() const {
  std::vector<Vertex> root_min(static_cast<std::size_t>(n_) + 1, 0);
  std::vector<Vertex> labels(static_cast<std::size_t>(n_) + 1, 0);
  for (Vertex v = 1; v <= n_; ++v) {
    Vertex r = find(v);
    if (root_min[r] == 0) root_min[r] = v;
    labels[v] = root_min[r];
  }
  return labels;
}

std::vector<std::vector<Vertex>> Partition::blocks() const {
  std::vector<Vertex> slot(static_cast<std::size_t>(n_) + 1, 0);
  std::vector<std::vector<Vertex>> out;
  out.reserve(clusters_);
  for (Vertex v = 1; v <= n_; ++v) {
    Vertex r = find(v);
    if (slot[r] == 0) {
      out.emplace_back();
      slot[r] = static_cast<Vertex>(out.size());
    }
    out[slot[r] - 1].push_back(v);
  }
  return out;
}

bool same_blocks(const Partition& a, const Partition& b) {
  return a.n() == b.n() && a.min_labels() == b.min_labels();
}

Partition connected_components(const Graph& g) {
  Partition p(g.n());
  for (const auto& [u, v] : g.edges()) p.unite(u, v);
  return p;
}

bool is_connected(const Graph& g) { return connected_components(g).cluster_count() <= 1; }

InducedDoubleGraph induce(const DoubleGraph& dg, std::span<const Vertex> subset) {
  if (subset.empty()) throw std::invalid_argument("induce: empty vertex subset");
  const Vertex n = dg.n();
  std::vector<Vertex> labels(subset.begin(), subset.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.front() < 1 || labels.back() > n) {
    throw std::invalid_argument("induce: vertex outside 1.." + std::to_string(n));
  }
  std::vector<Vertex> relabel(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) relabel[labels[i]] = static_cast<Vertex>(i + 1);

  auto restrict = [&](const Graph& g) {
    std::vector<Edge> kept;
    for (Vertex old : labels) {
      for (Vertex w : g.neighbors(old)) {
        if (w > old && relabel[w] != 0) kept.emplace_back(relabel[old], relabel[w]);
      }
    }
    // Relabeling is monotone, so lexicographic order is preserved.
    return Graph::from_sorted_unique(static_cast<Vertex>(labels.size()), std::move(kept));
  };
  return {DoubleGraph(restrict(dg.red), restrict(dg.blue)), std::move(labels)};
}

Graph graph_union(const Graph& a, const Graph& b) {
  if (a.n() != b.n()) throw std::invalid_argument("graph_union: vertex counts differ");
  std::vector<Edge> merged;
  merged.reserve(a.edge_count() + b.edge_count());
  std::set_union(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
                 std::back_inserter(merged));
  return Graph::from_sorted_unique(a.n(), std::move(merged));
}

DoubleGraph double_union(const DoubleGraph& a, const DoubleGraph& b) {
  return {graph_union(a.red, b.red), graph_union(a.blue, b.blue)};
}

Graph complete_graph(Vertex n) {
  std::vector<Edge> e;
  e.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex v = u + 1; v <= n; ++v) e.emplace_back(u, v);
  }
  return Graph::from_sorted_unique(n, std::move(e));
}

Graph path_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex u = 1; u < n; ++u) e.emplace_back(u, u + 1);
  return Graph::from_sorted_unique(n, std::move(e));
}

Graph cycle_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex u = 1; u < n; ++u) e.emplace_back(u, u + 1);
  if (n >= 3) e.emplace_back(1, n);
  return Graph(n, std::move(e));
}

}  // namespace jigsaw
