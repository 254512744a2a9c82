#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jigsaw/graph.hpp"

namespace jigsaw {

/// One connected component of the round-t cluster graph, merged into a single
/// cluster of round t+1.
///
/// `parts` lists the representatives (smallest members) of the merged round-t
/// clusters in breadth-first order from the smallest representative, visiting
/// neighbors in ascending order. For i >= 1, `tree_parent[i]` is the index of
/// an earlier part joined to parts[i] by both a red and a blue edge, so every
/// prefix of `parts` unions to an internally spanned set.
struct MergeRecord {
  std::uint32_t round = 0;
  std::vector<Vertex> parts;
  std::vector<std::uint32_t> tree_parent;
  Vertex size = 0;

  friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

struct SolveResult {
  Partition final;
  /// Number of rounds whose cluster graph had at least one edge.
  std::uint32_t rounds = 0;
  /// k_t for t = 0..rounds; the first entry is n.
  std::vector<Vertex> cluster_counts;
  /// Records ordered by round, then by smallest part.
  std::vector<MergeRecord> merge_trace;

  bool percolates() const { return final.cluster_count() == 1; }
};

struct SolveOptions {
  bool record_trace = true;
};

/// Literal round-synchronous dynamics: every round marks, for every pair of
/// current clusters, whether some red and some blue edge meet both, then
/// merges the connected components of that cluster graph. Θ(k² + m) per round.
SolveResult solve_reference(const DoubleGraph& dg, SolveOptions opts = {});

/// Same dynamics, same outputs. Round 0 uses E_red ∩ E_blue directly; later
/// rounds rescan only the adjacency of clusters that merged in the previous
/// round, since any new cluster-graph edge must touch one of them.
SolveResult solve_fast(const DoubleGraph& dg, SolveOptions opts = {});

/// The round-t cluster graph for a given partition (nodes and edges keyed by
/// smallest member).
ClusterGraph build_cluster_graph(const DoubleGraph& dg, const Partition& clusters);

bool percolates(const DoubleGraph& dg);

/// Whether the double graph induced on `subset` percolates on its own.
/// Throws std::invalid_argument on an empty subset.
bool is_internally_spanned(const DoubleGraph& dg, std::span<const Vertex> subset);

struct SpannedWitness {
  std::vector<Vertex> vertices;  // ascending
  std::size_t size() const { return vertices.size(); }
};

/// Member sets of the clusters named by each merge record, reconstructed by
/// replaying the trace: result[i][j] is the round-t cluster behind parts[j] of
/// record i.
std::vector<std::vector<std::vector<Vertex>>> replay_parts(Vertex n,
                                                           std::span<const MergeRecord> trace);

/// Smallest internally spanned set of size >= m that shows up in the merge
/// history of `dg`, including the pairwise unions along each record's spanning
/// tree. Absent when no history cluster reaches size m.
std::optional<SpannedWitness> spanned_witness_from_history(const DoubleGraph& dg, Vertex m);

inline constexpr Vertex kExhaustiveMaxVertices = 20;

/// First internally spanned subset of size >= m, scanning sizes ascending and
/// subsets of each size lexicographically. Exponential; throws
/// std::invalid_argument when n exceeds kExhaustiveMaxVertices.
std::optional<SpannedWitness> exhaustive_spanned(const DoubleGraph& dg, Vertex m);

/// Coarsest partition whose blocks induce connected subgraphs in both colors,
/// by alternately splitting blocks into red then blue components until stable.
Partition mutually_connected_clusters(const DoubleGraph& dg);

}  // namespace jigsaw
