#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace jigsaw {

/// Vertex labels are 1-indexed: a graph on n vertices uses labels 1..n.
using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph with immutable, sorted adjacency.
///
/// Edges are stored canonically as (min, max) pairs in lexicographic order.
/// Construction validates endpoints and rejects self-loops and duplicates.
class Graph {
 public:
  Graph() = default;
  explicit Graph(Vertex n);
  Graph(Vertex n, std::vector<Edge> edges);

  /// Builds from pairs that are already canonical, sorted and unique.
  /// Used by generators that emit edges in lexicographic order.
  static Graph from_sorted_unique(Vertex n, std::vector<Edge> edges);

  Vertex n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex u, Vertex v) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void build_adjacency();

  Vertex n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adj_;
};

/// Two edge sets on a common vertex set: red (people) and blue (puzzle).
struct DoubleGraph {
  Graph red;
  Graph blue;

  DoubleGraph() = default;
  DoubleGraph(Graph r, Graph b);

  Vertex n() const { return red.n(); }

  friend bool operator==(const DoubleGraph&, const DoubleGraph&) = default;
};

/// Disjoint-set forest over 1..n with path compression and union by rank.
class Partition {
 public:
  Partition() = default;
  explicit Partition(Vertex n);

  Vertex n() const { return n_; }
  Vertex cluster_count() const { return clusters_; }

  Vertex find(Vertex v) const;
  /// Returns true when u and v were in different blocks.
  bool unite(Vertex u, Vertex v);
  Vertex size_of(Vertex v) const { return size_[find(v)]; }
  Vertex largest_block() const;

  /// Blocks with members ascending, ordered by smallest member.
  std::vector<std::vector<Vertex>> blocks() const;
  /// Label of each vertex's block, as the block's smallest member.
  std::vector<Vertex> min_labels() const;

 private:
  Vertex n_ = 0;
  Vertex clusters_ = 0;
  mutable std::vector<Vertex> parent_;
  std::vector<std::uint8_t> rank_;
  std::vector<Vertex> size_;
};

/// Partition equality by block contents.
bool same_blocks(const Partition& a, const Partition& b);

/// Quotient graph on the current clusters: nodes are cluster representatives
/// (smallest member), edges join distinct clusters.
struct ClusterGraph {
  std::vector<Vertex> nodes;
  std::vector<Edge> edges;
};

Partition connected_components(const Graph& g);
bool is_connected(const Graph& g);

/// Subgraph induced on a vertex subset, relabeled densely.
struct InducedDoubleGraph {
  DoubleGraph graph;
  /// labels[i - 1] is the original label of new vertex i (ascending).
  std::vector<Vertex> labels;
};

/// Restricts both edge sets to `subset` and relabels 1..|subset| by increasing
/// original label. Throws std::invalid_argument on an empty or out-of-range
/// subset.
InducedDoubleGraph induce(const DoubleGraph& dg, std::span<const Vertex> subset);

/// Set union of two graphs on the same vertex count.
Graph graph_union(const Graph& a, const Graph& b);
DoubleGraph double_union(const DoubleGraph& a, const DoubleGraph& b);

Graph complete_graph(Vertex n);
Graph path_graph(Vertex n);
/// The n-cycle; degenerates to a single edge for n = 2 and no edges for n = 1.
Graph cycle_graph(Vertex n);

}  // namespace jigsaw
