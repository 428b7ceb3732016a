#pragma once

// Randomized cross-validation of the graph rewrite engine against the
// dense oracle.  Shared between the unit suite and the acceptance run.

#include <cstdint>
#include <string>

#include "tripleforge/coin.hpp"
#include "tripleforge/dense.hpp"
#include "tripleforge/graph.hpp"
#include "tripleforge/graph_state.hpp"

namespace tripleforge::testing {

struct OracleStats {
  int cases = 0;
  int checks = 0;
  int failures = 0;
  std::string first_failure;
};

inline void oracle_check(OracleStats& st, bool ok, const std::string& what) {
  st.checks++;
  if (!ok) {
    st.failures++;
    if (st.first_failure.empty()) st.first_failure = what;
  }
}

// One random case: a graph on <= 8 vertices with random phases, evolved by
// <= 6 random operations (Pauli-basis measurements with random signed bases
// and random pivot choices, plus Z frame corrections), compared after every
// step against an independently evolved state vector.
inline void run_oracle_case(OracleStats& st, SeededCoin& rng) {
  int n = 2 + (int)(rng.rng() % 7);
  Graph g(n);
  for (int a = 0; a < n; a++) {
    for (int b = a + 1; b < n; b++) {
      if (rng.rng() & 1) g.add_edge(a, b);
    }
  }
  uint64_t r = rng.rng() & ((1ull << n) - 1);
  GraphBasisState gbs(g, r);
  DenseState dense = gbs.to_dense();
  st.cases++;

  int ops = 1 + (int)(rng.rng() % 6);
  for (int t = 0; t < ops && gbs.alive; t++) {
    // pick a live vertex
    std::vector<int> live;
    for (int v = 0; v < n; v++) {
      if (gbs.live(v)) live.push_back(v);
    }
    int v = live[rng.rng() % live.size()];
    if (rng.rng() % 4 == 0) {
      gbs.apply_z(v, 1);
      dense.apply_pauli(PauliOperator::single_z(n, v));
    } else {
      SignedAxis basis{(Axis)(rng.rng() % 3), (rng.rng() & 1) != 0};
      int j0 = -1;
      uint64_t nbrs = gbs.graph.neighbors(v) & gbs.alive;
      if (nbrs && (rng.rng() & 1)) {
        std::vector<int> cand;
        for (int j = 0; j < n; j++) {
          if ((nbrs >> j) & 1) cand.push_back(j);
        }
        j0 = cand[rng.rng() % cand.size()];
      }
      MeasureResult res = gbs.measure_vertex(v, basis, rng, j0);
      PauliOperator obs(n, 0, 0, 0);
      switch (basis.axis) {
        case Axis::X: obs = PauliOperator::single_x(n, v); break;
        case Axis::Y: obs = PauliOperator::single_y(n, v); break;
        case Axis::Z: obs = PauliOperator::single_z(n, v); break;
      }
      if (basis.neg) obs = obs.negated();
      if (res.outcome) obs = obs.negated();
      double prob = 0.0;
      try {
        auto [pr, post] = dense.measure_pauli(obs, 0);
        prob = pr;
        dense = post;
      } catch (const std::domain_error&) {
        oracle_check(st, false, "engine picked a zero-probability branch");
        return;
      }
      double want = res.deterministic ? 1.0 : 0.5;
      oracle_check(st, std::abs(prob - want) < 1e-9, "branch probability mismatch");
    }
    oracle_check(st, equal_up_to_global_phase(gbs.to_dense(), dense, 1e-8),
                 "post-operation state mismatch");
    // the tableau view must agree with the oracle as well
    for (const auto& gen : gbs.to_stabilizer().generators) {
      oracle_check(st, std::abs(dense.expectation(gen) - 1.0) < 1e-8,
                   "tableau generator not stabilizing the oracle state");
    }
  }
}

inline OracleStats run_oracle_cases(uint64_t seed, int cases) {
  OracleStats st;
  SeededCoin rng(seed);
  for (int i = 0; i < cases; i++) run_oracle_case(st, rng);
  return st;
}

}  // namespace tripleforge::testing
