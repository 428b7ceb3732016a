#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace tripleforge {

// Simple undirected graph on vertices 0..n-1, adjacency rows as bitmasks.
// External formats (and the source material) label vertices from 1; the
// JSON layer converts.
struct Graph {
  int n = 0;
  std::vector<uint64_t> adj;

  Graph() = default;
  explicit Graph(int n_) : n(n_), adj(n_, 0) {
    if (n_ < 0 || n_ > 64) throw std::invalid_argument("vertex count out of range");
  }

  void check(int v) const {
    if (v < 0 || v >= n) throw std::out_of_range("vertex out of range");
  }

  void add_edge(int a, int b) {
    check(a);
    check(b);
    if (a == b) throw std::invalid_argument("no self loops");
    adj[a] |= 1ull << b;
    adj[b] |= 1ull << a;
  }

  void toggle_edge(int a, int b) {
    check(a);
    check(b);
    if (a == b) throw std::invalid_argument("no self loops");
    adj[a] ^= 1ull << b;
    adj[b] ^= 1ull << a;
  }

  bool has_edge(int a, int b) const {
    check(a);
    check(b);
    return (adj[a] >> b) & 1;
  }

  uint64_t neighbors(int v) const {
    check(v);
    return adj[v];
  }

  int degree(int v) const { return std::popcount(neighbors(v)); }

  bool operator==(const Graph& o) const { return n == o.n && adj == o.adj; }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n; a++) {
      for (int b = a + 1; b < n; b++) {
        if ((adj[a] >> b) & 1) out.push_back({a, b});
      }
    }
    return out;
  }
};

// Complement the edges within the neighborhood of v; the input is untouched.
inline Graph local_complementation(const Graph& g, int v) {
  g.check(v);
  Graph out = g;
  uint64_t nb = g.adj[v];
  for (int j = 0; j < g.n; j++) {
    if ((nb >> j) & 1) out.adj[j] ^= nb & ~(1ull << j);
  }
  return out;
}

// {"n":…, "edges":[[i,j],…], "phases":[…], "ownership":{"A":[…],…}}
// with 1-based vertex labels.
inline nlohmann::json graph_to_json(const Graph& g, uint64_t phases,
                                    const std::vector<std::vector<int>>* ownership = nullptr) {
  nlohmann::json j;
  j["n"] = g.n;
  auto edges = nlohmann::json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a + 1, b + 1});
  j["edges"] = edges;
  auto ph = nlohmann::json::array();
  for (int i = 0; i < g.n; i++) ph.push_back((int)((phases >> i) & 1));
  j["phases"] = ph;
  if (ownership) {
    static const char* names[3] = {"A", "B", "R"};
    nlohmann::json own;
    for (int k = 0; k < 3; k++) own[names[k]] = (*ownership)[k];
    j["ownership"] = own;
  }
  return j;
}

inline std::pair<Graph, uint64_t> graph_from_json(const nlohmann::json& j) {
  Graph g(j.at("n").get<int>());
  for (const auto& e : j.at("edges")) {
    g.add_edge(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
  }
  uint64_t phases = 0;
  if (j.contains("phases")) {
    const auto& ph = j.at("phases");
    if ((int)ph.size() != g.n) throw std::invalid_argument("phase vector length mismatch");
    for (int i = 0; i < g.n; i++) {
      if (ph.at(i).get<int>()) phases |= 1ull << i;
    }
  }
  return {g, phases};
}

}  // namespace tripleforge
