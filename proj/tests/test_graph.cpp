#include "doctest.h"
#include "tripleforge/coin.hpp"
#include "tripleforge/graph.hpp"

using namespace tripleforge;

TEST_SUITE_BEGIN("graph");

static Graph random_graph(SeededCoin& rng, int n) {
  Graph g(n);
  for (int a = 0; a < n; a++) {
    for (int b = a + 1; b < n; b++) {
      if (rng.rng() & 1) g.add_edge(a, b);
    }
  }
  return g;
}

TEST_CASE("local complementation on a path makes a triangle") {
  Graph p3(3);
  p3.add_edge(0, 1);
  p3.add_edge(1, 2);
  Graph t = local_complementation(p3, 1);
  CHECK(t.has_edge(0, 1));
  CHECK(t.has_edge(1, 2));
  CHECK(t.has_edge(0, 2));
  // complementing at a leaf does nothing
  CHECK(local_complementation(p3, 0) == p3);
}

TEST_CASE("local complementation is an involution") {
  SeededCoin rng(11);
  for (int trial = 0; trial < 100; trial++) {
    int n = 2 + (int)(rng.rng() % 7);
    Graph g = random_graph(rng, n);
    int v = (int)(rng.rng() % n);
    CHECK(local_complementation(local_complementation(g, v), v) == g);
  }
}

TEST_CASE("json round trip with phases and ownership") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  std::vector<std::vector<int>> own{{1, 4}, {2}, {3}};
  auto j = graph_to_json(g, 0b1010, &own);
  CHECK(j["edges"][0] == nlohmann::json({1, 2}));
  CHECK(j["ownership"]["A"] == nlohmann::json({1, 4}));
  auto [g2, ph] = graph_from_json(j);
  CHECK(g2 == g);
  CHECK(ph == 0b1010);
}

TEST_CASE("malformed graph json is rejected") {
  auto j = nlohmann::json::parse(R"({"n":2,"edges":[[1,1]]})");
  CHECK_THROWS_AS(graph_from_json(j), std::invalid_argument);
  auto k = nlohmann::json::parse(R"({"n":2,"edges":[[1,3]]})");
  CHECK_THROWS_AS(graph_from_json(k), std::out_of_range);
  auto l = nlohmann::json::parse(R"({"n":2,"edges":[],"phases":[1]})");
  CHECK_THROWS_AS(graph_from_json(l), std::invalid_argument);
}

TEST_SUITE_END();
