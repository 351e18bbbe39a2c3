#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/graph.hpp"

using namespace qwalk;

namespace {

Graph from(std::size_t n, std::vector<Edge> e) { return Graph::from_edges(n, e); }

std::vector<std::vector<NodeId>> lists(const Graph& g) {
  std::vector<std::vector<NodeId>> out;
  for (NodeId v = 0; v < g.num_nodes(); ++v) out.push_back(g.neighbors(v));
  return out;
}

}  // namespace

TEST_CASE("build_graph") {
  const Graph k2 = from(2, {{0, 1}});
  CHECK(k2.max_degree() == 1);
  CHECK(k2.slots(0).size() == 1);
  CHECK(k2.slots(0)[0] == Slot{1, 0});

  const Graph c3 = from(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(c3.max_degree() == 2);
  CHECK(c3.num_edges() == 3);
  CHECK(c3.neighbors(0) == std::vector<NodeId>{1, 2});

  CHECK_THROWS_AS(from(2, {{0, 1}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(from(2, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(from(2, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(from(2, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("neighbor lists must be symmetric") {
  CHECK_THROWS_AS(Graph::from_neighbor_lists({{1}, {}}), std::invalid_argument);
  CHECK(Graph::from_neighbor_lists({{1}, {0}}) == from(2, {{0, 1}}));
}

TEST_CASE("regularize_with_self_loops") {
  const Graph p = regularize_with_self_loops(path_graph(3));
  CHECK(p.self_loops(0) == 1);
  CHECK(p.self_loops(1) == 0);
  CHECK(p.self_loops(2) == 1);
  CHECK(p.slots(0)[1] == Slot{0, 1});
  CHECK(p.neighbors(0) == path_graph(3).neighbors(0));

  const Graph c = cycle_graph(3);
  CHECK(regularize_with_self_loops(c) == c);

  const Graph star = regularize_with_self_loops(star_graph(5));
  for (NodeId leaf = 1; leaf <= 5; ++leaf) {
    CHECK(star.self_loops(leaf) == 4);
    CHECK(star.slots(leaf)[0].target == 0);
  }
  CHECK_THROWS_AS(regularize_with_self_loops(star_graph(5), 3), std::invalid_argument);
}

TEST_CASE("betweenness examples") {
  CHECK(betweenness_centrality(path_graph(3)) == std::vector<double>{0, 1, 0});
  CHECK(betweenness_centrality(cycle_graph(3)) == std::vector<double>{0, 0, 0});
  const auto s = betweenness_centrality(star_graph(3));
  CHECK(s[0] == doctest::Approx(3.0));
  for (int i = 1; i <= 3; ++i) CHECK(s[i] == 0.0);
}

TEST_CASE("betweenness of a disconnected graph is per component") {
  const Graph g = from(6, {{0, 1}, {1, 2}, {3, 4}});
  const auto s = betweenness_centrality(g);
  CHECK(s == std::vector<double>{0, 1, 0, 0, 0, 0});
}

TEST_CASE("betweenness matches the path-enumeration oracle") {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const Graph& g : oracle::all_connected_graphs(n)) {
      const auto got = betweenness_centrality(g);
      const auto want = oracle::betweenness(g);
      for (std::size_t v = 0; v < n; ++v) REQUIRE(got[v] == doctest::Approx(want[v]).epsilon(1e-12));
    }
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = oracle::random_connected_graph(6 + trial % 2, rng, 0.3);
    const auto got = betweenness_centrality(g);
    const auto want = oracle::betweenness(g);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) REQUIRE(got[v] == doctest::Approx(want[v]).epsilon(1e-12));
  }
}

TEST_CASE("random walk similarity examples") {
  const Matrix k2 = random_walk_similarity(from(2, {{0, 1}}), 1);
  CHECK(k2(0, 1) == 0.0);
  const Matrix c3 = random_walk_similarity(cycle_graph(3), 1);
  CHECK(c3(0, 1) == doctest::Approx(0.25));
  for (int i = 0; i < 3; ++i) CHECK(c3(i, i) > 0.0);
  CHECK_THROWS_AS(random_walk_similarity(from(3, {{0, 1}}), 1), std::invalid_argument);
  CHECK_THROWS_AS(random_walk_similarity(cycle_graph(3), 0), std::invalid_argument);
  CHECK_THROWS_AS(EdgeOrdering::similarity(0), std::invalid_argument);
}

TEST_CASE("similarity is symmetric and matches the walk-enumeration oracle") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_connected_graph(3 + trial % 6, rng);
    const int k = 1 + trial % 3;
    const Matrix s = random_walk_similarity(g, k);
    const auto want = oracle::similarity(g, k);
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        CHECK(std::abs(s(i, j) - s(j, i)) < 1e-12);
        CHECK(std::abs(s(i, j) - want[i][j]) < 1e-12);
      }
  }
}

TEST_CASE("order_edges examples") {
  const Graph p = order_edges(path_graph(3), EdgeOrdering::centrality());
  CHECK(p.neighbors(0) == std::vector<NodeId>{1});
  CHECK(p.neighbors(1) == std::vector<NodeId>{0, 2});

  std::mt19937_64 rng(2);
  const Graph g = oracle::random_connected_graph(7, rng);
  CHECK(order_edges(g, EdgeOrdering::as_given()) == g);

  const Graph s = order_edges(star_graph(3), EdgeOrdering::centrality());
  for (NodeId leaf = 1; leaf <= 3; ++leaf) CHECK(s.neighbors(leaf) == std::vector<NodeId>{0});
  CHECK(s.neighbors(0) == std::vector<NodeId>{1, 2, 3});
}

TEST_CASE("order_edges keeps the edge set and re-pads self-loops") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = regularize_with_self_loops(oracle::random_connected_graph(4 + trial % 7, rng));
    for (const EdgeOrdering& o : {EdgeOrdering::centrality(), EdgeOrdering::similarity(1 + trial % 3)}) {
      const Graph h = order_edges(g, o);
      CHECK(h.edges() == g.edges());
      for (NodeId v = 0; v < g.num_nodes(); ++v) CHECK(h.slot_count(v) == g.slot_count(v));
    }
  }
}

TEST_CASE("similarity ordering tolerates isolated nodes") {
  const Graph g = from(4, {{0, 1}, {1, 2}});
  const Graph h = order_edges(g, EdgeOrdering::similarity(2));
  CHECK(h.edges() == g.edges());
  CHECK(h.degree(3) == 0);
}

TEST_CASE("orderings match brute-force oracles on all small connected graphs") {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const Graph& g : oracle::all_connected_graphs(n)) {
      const auto bc = oracle::betweenness(g);
      const Graph byc = order_edges(g, EdgeOrdering::centrality());
      for (int k = 1; k <= 2; ++k) {
        const auto sim = oracle::similarity(g, k);
        const Graph bys = order_edges(g, EdgeOrdering::similarity(k));
        for (NodeId v = 0; v < n; ++v)
          REQUIRE(bys.neighbors(v) == oracle::rank(g.neighbors(v), [&](NodeId u) { return sim[v][u]; }));
      }
      for (NodeId v = 0; v < n; ++v)
        REQUIRE(byc.neighbors(v) == oracle::rank(g.neighbors(v), [&](NodeId u) { return bc[u]; }));
    }
  }
}

TEST_CASE("build_shift examples") {
  const ShiftPermutation k2 = build_shift(from(2, {{0, 1}}));
  REQUIRE(k2.pairs().size() == 1);
  CHECK(k2.pairs()[0].first == SlotRef{0, 0});
  CHECK(k2.pairs()[0].second == SlotRef{1, 0});

  // Slot 0 of each node is its "right" neighbor.
  const Graph tour = Graph::from_neighbor_lists({{1, 2}, {2, 0}, {0, 1}});
  const ShiftPermutation s = build_shift(tour);
  CHECK(s(SlotRef{0, 0}) == SlotRef{1, 1});
  CHECK(s(SlotRef{1, 0}) == SlotRef{2, 1});
  CHECK(s(SlotRef{2, 0}) == SlotRef{0, 1});

  const Graph padded = regularize_with_self_loops(path_graph(3));
  const ShiftPermutation ps = build_shift(padded);
  CHECK(ps(SlotRef{0, 1}) == SlotRef{0, 1});
  CHECK(ps(SlotRef{2, 1}) == SlotRef{2, 1});
}

TEST_CASE("build_shift is an involution on random graphs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = oracle::random_connected_graph(1 + rng() % 30, rng, 0.1);
    if (trial % 2) g = regularize_with_self_loops(g);
    const std::size_t d = g.slot_dim() + trial % 3;
    const ShiftPermutation s = build_shift(g, d);
    for (std::size_t flat = 0; flat < s.size(); ++flat) REQUIRE(s(s(flat)) == flat);
    for (const auto& [a, b] : s.pairs()) {
      const auto nb = g.neighbors(a.node);
      REQUIRE(a.slot < nb.size());
      CHECK(nb[a.slot] == b.node);
      CHECK(g.neighbors(b.node)[b.slot] == a.node);
    }
  }
}

TEST_CASE("edge list round trip") {
  std::istringstream in("# a comment\n0 1\n1 2 # trailing\n\n2 0\n");
  const Graph g = read_edge_list(in);
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 3);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream back(out.str());
  const Graph again = read_edge_list(back);
  CHECK(again.edges() == g.edges());
  CHECK(again.num_nodes() == 3);

  std::ostringstream iso;
  write_edge_list(iso, from(5, {{0, 1}}));
  std::istringstream iso_in(iso.str());
  CHECK(read_edge_list(iso_in).num_nodes() == 5);

  std::istringstream bad("0 x\n");
  CHECK_THROWS(read_edge_list(bad));
}

TEST_CASE("generators") {
  const Graph c = cycle_graph(5);
  for (NodeId v = 0; v < 5; ++v) CHECK(c.neighbors(v)[0] == (v + 1) % 5);
  const Graph l = lattice_graph(3, 3);
  CHECK(l.num_edges() == 12);
  CHECK(l.max_degree() == 4);
  CHECK(complete_graph(5).num_edges() == 10);
  CHECK(star_graph(4).degree(0) == 4);
}
