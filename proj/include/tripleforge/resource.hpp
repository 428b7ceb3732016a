#pragma once

#include <array>
#include <vector>

#include "tripleforge/graph.hpp"
#include "tripleforge/graph_state.hpp"

namespace tripleforge {

enum class Party : int { A = 0, B = 1, R = 2 };

inline const char* party_name(Party p) {
  switch (p) {
    case Party::A: return "A";
    case Party::B: return "B";
    case Party::R: return "R";
  }
  return "?";
}

// The 12-qubit triple-extraction resource.  Vertices are stored 0-based;
// names in comments use the 1-based labels of the protocol description.
//
// Regions: ArmA {1,2,3}, ArmB {4,5,6}, Tail {7,8}, Fork {9,10,11,12}.
// Ownership: A {1,5,10,11}, B {2,4,8,9}, R {3,6,7,12}.
struct ResourceSpec {
  Graph graph;
  std::array<std::vector<int>, 4> regions;    // ArmA, ArmB, Tail, Fork (0-based)
  std::array<std::vector<int>, 3> ownership;  // A, B, R (0-based)

  Party owner(int v) const {
    for (int k = 0; k < 3; k++) {
      for (int u : ownership[k]) {
        if (u == v) return (Party)k;
      }
    }
    throw std::out_of_range("vertex has no owner");
  }
};

inline ResourceSpec build_g_and_spec() {
  ResourceSpec spec;
  spec.graph = Graph(12);
  // Arms chain into the fork leaves, the tail into leaf 11, and the fork
  // is a star centered on 12.
  const int edges[][2] = {{1, 2},  {2, 3},  {3, 9},  {4, 5},  {5, 6},  {6, 10},
                          {7, 8},  {8, 11}, {9, 12}, {10, 12}, {11, 12}};
  for (auto [a, b] : edges) spec.graph.add_edge(a - 1, b - 1);
  spec.regions = {std::vector<int>{0, 1, 2}, {3, 4, 5}, {6, 7}, {8, 9, 10, 11}};
  spec.ownership = {std::vector<int>{0, 4, 9, 10}, {1, 3, 7, 8}, {2, 5, 6, 11}};
  return spec;
}

inline GraphBasisState build_g_and_state() {
  return GraphBasisState(build_g_and_spec().graph, 0);
}

inline nlohmann::json resource_to_json(const ResourceSpec& spec) {
  std::vector<std::vector<int>> own(3);
  for (int k = 0; k < 3; k++) {
    for (int v : spec.ownership[k]) own[k].push_back(v + 1);
  }
  return graph_to_json(spec.graph, 0, &own);
}

}  // namespace tripleforge
