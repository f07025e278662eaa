#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilgraph/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace nilgraph;

TEST_CASE("parse: 1-based indices, comments, blank lines") {
  auto g = parse_graph("# triangle\nvertices 3\n\nedge 1 2  # first\nedge 2 3\nedge 3 1\n");
  CHECK(g.vertex_count() == 3);
  REQUIRE(g.edge_count() == 3);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edges()[2] == Edge{2, 0});
  CHECK(g == generate_named("K3"));
}

TEST_CASE("parse errors carry the line number") {
  auto msg = [](const char* text) {
    try {
      parse_graph(text);
    } catch (const GraphError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(msg("vertices 2\nedge 1 x\n").find("line 2") != std::string::npos);
  CHECK(msg("edge 1 2\n").find("line 1") != std::string::npos);
  CHECK(msg("vertices 2\nedge 1 2 3\n").find("line 2") != std::string::npos);
  CHECK_THROWS_AS(parse_graph("vertices 2\n"), GraphError);
  CHECK_THROWS_AS(parse_graph(""), GraphError);
}

TEST_CASE("invalid graphs are rejected") {
  CHECK_THROWS_AS(DirectedGraph(2, {{0, 0}}), GraphError);
  CHECK_THROWS_AS(DirectedGraph(2, {{0, 2}}), GraphError);
  CHECK_THROWS_AS(DirectedGraph(2, {{0, 1}, {0, 1}}), GraphError);
  CHECK_THROWS_AS(DirectedGraph(2, {{0, 1}, {1, 0}}), GraphError);
  CHECK_THROWS_AS(DirectedGraph(3, {}), GraphError);
  CHECK_THROWS_AS(parse_graph("vertices 2\nedge 1 1\n"), GraphError);
}

TEST_CASE("serialize round trip") {
  for (const char* n : {"K2", "K3", "K4", "K5", "S3", "P4", "C5", "G1", "G2"}) {
    auto g = generate_named(n);
    CHECK(parse_graph(g.serialize()) == g);
  }
}

TEST_CASE("named families have the expected sizes") {
  CHECK(generate_named("K5").edge_count() == 10);
  CHECK(generate_named("S4").vertex_count() == 5);
  CHECK(generate_named("S4").edge_count() == 4);
  CHECK(generate_named("P4").edge_count() == 3);
  CHECK(generate_named("C4").edge_count() == 4);
  CHECK(generate_named("G1").edge_count() == 5);
  CHECK(generate_named("G2").edge_count() == 4);
  CHECK_THROWS_AS(generate_named("Q3"), GraphError);
  CHECK_THROWS_AS(generate_named("K1"), GraphError);
  CHECK_THROWS_AS(generate_named("C2"), GraphError);
  CHECK_THROWS_AS(generate_named("K"), GraphError);
}

TEST_CASE("G1 and G2 are K4 minus one and two edges") {
  auto k4 = generate_named("K4");
  auto sub = [&](const DirectedGraph& g) {
    for (const auto& e : g.edges())
      if (!k4.edge_between(e.source, e.target)) return false;
    return true;
  };
  CHECK(sub(generate_named("G1")));
  CHECK(sub(generate_named("G2")));
  // G2 has a vertex of degree 1 (the "paw")
  std::vector<int> deg(4, 0);
  auto g2 = generate_named("G2");
  for (const auto& e : g2.edges()) {
    ++deg[e.source];
    ++deg[e.target];
  }
  std::sort(deg.begin(), deg.end());
  CHECK(deg == std::vector<int>{1, 2, 2, 3});
}

TEST_CASE("recognize named graphs") {
  CHECK(recognize_named(generate_named("K3")) == std::optional<std::string>("K3"));
  CHECK(recognize_named(generate_named("G1")) == std::optional<std::string>("G1"));
  CHECK(recognize_named(generate_named("S3")) == std::optional<std::string>("S3"));
  CHECK(recognize_named(generate_named("K3").reversed()) == std::nullopt);
}

TEST_CASE("isomorphism ignores labels and orientation") {
  std::mt19937_64 rng(7);
  for (const char* n : {"K4", "C4", "P4", "G1", "G2", "S3"}) {
    auto g = generate_named(n);
    std::vector<int> perm(g.vertex_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(isomorphic(g, g.relabeled(perm)));
    CHECK(isomorphic(g, g.reversed()));
  }
  CHECK_FALSE(isomorphic(generate_named("C4"), generate_named("S3")));
  CHECK_FALSE(isomorphic(generate_named("G1"), generate_named("K4")));
  CHECK_FALSE(isomorphic(generate_named("P4"), generate_named("S3")));
}

TEST_CASE("components and disjoint union") {
  auto u = disjoint_union(generate_named("K2"), generate_named("K3"));
  CHECK(u.vertex_count() == 5);
  CHECK(u.edge_count() == 4);
  auto comps = connected_components(u);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].size() == 2);
  CHECK(comps[1].size() == 3);
  CHECK(connected_components(generate_named("K4")).size() == 1);
}

TEST_CASE("edge_between is symmetric") {
  auto g = generate_named("K3");
  CHECK(g.edge_between(0, 2) == std::optional<int>(2));
  CHECK(g.edge_between(2, 0) == std::optional<int>(2));
  CHECK_FALSE(generate_named("P4").edge_between(0, 3));
}
