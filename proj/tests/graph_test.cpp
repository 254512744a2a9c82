#include <sstream>

#include "doctest.h"
#include "jigsaw/edge_list.hpp"
#include "jigsaw/graph.hpp"
#include "jigsaw/solver.hpp"
#include "test_graphs.hpp"

using namespace jigsaw;
using jigsaw::testing::make_double;
using jigsaw::testing::make_graph;

using Blocks = std::vector<std::vector<Vertex>>;

TEST_CASE("graph: construction canonicalizes and validates") {
  Graph g(4, {{3, 1}, {2, 4}});
  CHECK(g.edges() == std::vector<Edge>{{1, 3}, {2, 4}});
  CHECK(g.has_edge(3, 1));
  CHECK(g.has_edge(1, 3));
  CHECK_FALSE(g.has_edge(1, 2));
  CHECK(g.degree(1) == 1);

  CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{1, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{1, 2}, {2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(DoubleGraph(Graph(3), Graph(4)), std::invalid_argument);
}

TEST_CASE("graph: adjacency agrees with the edge set") {
  Rng rng({11, 0});
  for (int rep = 0; rep < 50; ++rep) {
    const Vertex n = 1 + static_cast<Vertex>(rng.next_u64() % 25);
    Graph g = gen_er_dense(n, rng.uniform(), {rng.next_u64(), 0});
    std::size_t degree_sum = 0;
    for (Vertex u = 1; u <= n; ++u) {
      degree_sum += g.degree(u);
      for (Vertex v = 1; v <= n; ++v) {
        bool listed = std::binary_search(g.edges().begin(), g.edges().end(),
                                         Edge{std::min(u, v), std::max(u, v)}) && u != v;
        CHECK(g.has_edge(u, v) == listed);
      }
      auto nb = g.neighbors(u);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
    }
    CHECK(degree_sum == 2 * g.edge_count());
  }
}

TEST_CASE("connected_components: examples") {
  CHECK(connected_components(Graph(3)).blocks() == Blocks{{1}, {2}, {3}});
  CHECK(connected_components(path_graph(3)).blocks() == Blocks{{1, 2, 3}});
  CHECK(connected_components(make_graph(5, {{1, 2}, {3, 4}})).blocks() ==
        Blocks{{1, 2}, {3, 4}, {5}});
}

TEST_CASE("is_connected: examples") {
  CHECK(is_connected(complete_graph(4)));
  CHECK(is_connected(Graph(1)));
  CHECK_FALSE(is_connected(make_graph(3, {{1, 2}})));
}

TEST_CASE("connected_components: spanning-forest inequality") {
  Rng rng({12, 0});
  for (int rep = 0; rep < 200; ++rep) {
    const Vertex n = 1 + static_cast<Vertex>(rng.next_u64() % 30);
    Graph g = gen_er_dense(n, 0.2 * rng.uniform(), {rng.next_u64(), 0});
    CHECK(connected_components(g).cluster_count() + g.edge_count() >= n);
  }
}

TEST_CASE("partition: unions decrement the count by exactly one") {
  Rng rng({13, 0});
  Partition p(50);
  for (int i = 0; i < 300; ++i) {
    const Vertex a = 1 + static_cast<Vertex>(rng.next_u64() % 50);
    const Vertex b = 1 + static_cast<Vertex>(rng.next_u64() % 50);
    const Vertex before = p.cluster_count();
    const bool merged = p.unite(a, b);
    CHECK(p.cluster_count() == before - (merged ? 1 : 0));
    CHECK(p.find(a) == p.find(b));
  }
  auto blocks = p.blocks();
  CHECK(blocks.size() == p.cluster_count());
  std::vector<Vertex> all;
  for (const auto& b : blocks) {
    CHECK_FALSE(b.empty());
    all.insert(all.end(), b.begin(), b.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<Vertex> expect(50);
  std::iota(expect.begin(), expect.end(), Vertex{1});
  CHECK(all == expect);
}

TEST_CASE("induce: examples and errors") {
  auto dg = make_double(6, {{2, 5}, {1, 2}, {3, 4}}, {{1, 6}, {2, 3}});

  auto full = induce(dg, std::vector<Vertex>{1, 2, 3, 4, 5, 6});
  CHECK(full.graph == dg);
  CHECK(full.labels == std::vector<Vertex>{1, 2, 3, 4, 5, 6});

  auto pair = induce(dg, std::vector<Vertex>{5, 2});
  CHECK(pair.graph.n() == 2);
  CHECK(pair.graph.red.edges() == std::vector<Edge>{{1, 2}});
  CHECK(pair.graph.blue.edge_count() == 0);
  CHECK(pair.labels == std::vector<Vertex>{2, 5});

  auto single = induce(dg, std::vector<Vertex>{4});
  CHECK(single.graph.n() == 1);
  CHECK(single.graph.red.edge_count() == 0);

  CHECK_THROWS_AS(induce(dg, std::vector<Vertex>{}), std::invalid_argument);
  CHECK_THROWS_AS(induce(dg, std::vector<Vertex>{7}), std::invalid_argument);
}

TEST_CASE("induce on the full vertex set preserves the solver outcome") {
  Rng rng({14, 0});
  for (int rep = 0; rep < 200; ++rep) {
    auto dg = jigsaw::testing::random_small_double(rng, 20);
    std::vector<Vertex> all(dg.n());
    std::iota(all.begin(), all.end(), Vertex{1});
    auto a = solve_fast(dg);
    auto b = solve_fast(induce(dg, all).graph);
    CHECK(a.final.blocks() == b.final.blocks());
    CHECK(a.cluster_counts == b.cluster_counts);
  }
}

TEST_CASE("graph_union and cycle_graph") {
  Graph a(4, {{1, 2}, {2, 3}});
  Graph b(4, {{2, 3}, {3, 4}});
  CHECK(graph_union(a, b).edges() == std::vector<Edge>{{1, 2}, {2, 3}, {3, 4}});
  CHECK(cycle_graph(1).edge_count() == 0);
  CHECK(cycle_graph(2).edge_count() == 1);
  CHECK(cycle_graph(5).edge_count() == 5);
  CHECK(cycle_graph(5).has_edge(5, 1));
}

TEST_CASE("edge list: parse and write") {
  std::istringstream in("4 3 3\nR 1 2\nR 1 3\nR 1 4\nB 1 2\nB 2 3\nB 3 4\n");
  DoubleGraph dg = read_edge_list(in);
  CHECK(dg == jigsaw::testing::hand_example());
  std::ostringstream out;
  write_edge_list(out, dg);
  CHECK(out.str() == "4 3 3\nR 1 2\nR 1 3\nR 1 4\nB 1 2\nB 2 3\nB 3 4\n");
}

TEST_CASE("edge list: write then read is the identity on random graphs") {
  Rng rng({15, 0});
  for (int rep = 0; rep < 30; ++rep) {
    auto dg = jigsaw::testing::random_small_double(rng, 30);
    std::stringstream buf;
    write_edge_list(buf, dg);
    CHECK(read_edge_list(buf) == dg);
  }
}

TEST_CASE("edge list: rejects malformed input with line numbers") {
  auto fails_at = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      read_edge_list(in);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      return;
    }
    FAIL("expected ParseError for: " << text);
  };
  fails_at("3 1 0\nR 1 1\n", 2);       // self-loop
  fails_at("3 1 0\nR 1 4\n", 2);       // out of range
  fails_at("3 1 0\nR 2 1\n", 2);       // u > v
  fails_at("3 2 0\nR 1 2\nR 1 2\n", 3);  // duplicate
  fails_at("3 0 1\nG 1 2\n", 2);       // unknown color
  fails_at("0 0 0\n", 1);              // n = 0
  fails_at("3 x 0\n", 1);              // bad header
  fails_at("3 0 1\nB 1 2 9\n", 2);     // trailing token
  fails_at("3 1 0\n", 0);              // truncated
  fails_at("3 0 1\nR 1 2\n", 0);       // color counts disagree
  fails_at("3 0 0\nR 1 2\n", 2);       // trailing content

  std::istringstream same_pair_both_colors("2 1 1\nR 1 2\nB 1 2\n");
  CHECK(read_edge_list(same_pair_both_colors).n() == 2);
}
