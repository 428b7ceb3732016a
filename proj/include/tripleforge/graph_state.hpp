#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tripleforge/clifford1q.hpp"
#include "tripleforge/dense.hpp"
#include "tripleforge/graph.hpp"
#include "tripleforge/pauli.hpp"

namespace tripleforge {

// (-1)^{r_i} X_i prod_{j in N_i} Z_j on the full register.
inline PauliOperator correlation_operator(const Graph& g, uint64_t phases, int i) {
  g.check(i);
  int ph = ((phases >> i) & 1) ? 2 : 0;
  return PauliOperator(g.n, 1ull << i, g.neighbors(i), ph);
}

// A graph state with encoded phase information, evolved under single-qubit
// Pauli measurements via graph rewrite rules.  The represented state is
//   (prod_v byproduct_v) Z^r |G_live>  tensor  (eigenstates of dead vertices).
// Measured vertices are tombstoned in place so labels stay stable.
class GraphBasisState {
 public:
  struct Tombstone {
    int vertex;
    SignedAxis basis;
    int outcome;
  };

  Graph graph;
  uint64_t alive = 0;
  uint64_t phases = 0;
  std::vector<Clifford1Q> byproducts;
  std::vector<Tombstone> tombstones;

  GraphBasisState() = default;
  GraphBasisState(Graph g, uint64_t r)
      : graph(std::move(g)),
        alive(graph.n == 64 ? ~0ull : (1ull << graph.n) - 1),
        phases(r),
        byproducts(graph.n) {}

  int n() const { return graph.n; }
  bool live(int v) const { return (alive >> v) & 1; }
  int phase_bit(int v) const { return (phases >> v) & 1; }

  void require_live(int v) const {
    graph.check(v);
    if (!live(v)) throw std::logic_error("vertex already measured");
  }

  // Z_v^e on the physical register; folds through any pending byproduct.
  void apply_z(int v, int exponent) {
    require_live(v);
    if (!exponent) return;
    apply_graph_pauli(v, byproducts[v].inverse().img({Axis::Z, false}).axis);
  }

  // Rewrites the state in the graph basis of tau_v(G), using
  //   |tau_v(G)> = (-iX_v)^{1/2} prod_{k in N_v} (iZ_k)^{1/2} |G>,
  // leaving the represented state untouched.
  void complement_at(int v) {
    require_live(v);
    uint64_t nbrs = graph.neighbors(v) & alive;
    graph = local_complementation(graph, v);
    for (int k = 0; k < n(); k++) {
      if ((nbrs >> k) & 1) {
        byproducts[k] = then_apply(sqrt_plus_iz().inverse(), byproducts[k]);
      }
    }
    byproducts[v] = then_apply(sqrt_minus_ix().inverse(), byproducts[v]);
    // Z_v^{r_v} commutes past (-iX_v)^{-1/2} as (-Y_v)^{r_v} = (K'_v-fold)
    if (phase_bit(v)) phases ^= nbrs;
  }

  MeasureResult measure_vertex(int v, SignedAxis basis, CoinSource& coin, int j0 = -1) {
    require_live(v);
    SignedAxis eff = byproducts[v].inverse().img(basis);
    uint64_t nbrs = graph.neighbors(v) & alive;

    // An X-basis measurement with live neighbors: complement at the pivot,
    // which turns the effective basis into Y, then complement back so the
    // surviving graph is tau_{j0}(tau_v(tau_{j0}(G)) - {v}).
    if (eff.axis == Axis::X && nbrs != 0) {
      if (j0 < 0) j0 = std::countr_zero(nbrs);
      if (!((nbrs >> j0) & 1)) throw std::invalid_argument("j0 must be a live neighbor");
      complement_at(j0);
      MeasureResult res = measure_vertex(v, basis, coin);
      complement_at(j0);
      return res;
    }

    MeasureResult res;
    int mu;  // outcome for the positive-axis observable on the graph-basis part
    if (eff.axis == Axis::X && nbrs == 0) {
      mu = phase_bit(v);
      res.deterministic = true;
    } else {
      mu = coin.bit();
      res.deterministic = false;
    }
    res.outcome = mu ^ (eff.neg ? 1 : 0);

    switch (eff.axis) {
      case Axis::Z: {
        if (mu) {
          for (int j = 0; j < n(); j++) {
            if ((nbrs >> j) & 1) phases ^= 1ull << j;
          }
        }
        break;
      }
      case Axis::Y: {
        int flip = phase_bit(v) ^ mu;
        graph = local_complementation(graph, v);
        for (int j = 0; j < n(); j++) {
          if ((nbrs >> j) & 1) {
            byproducts[j] = then_apply(sqrt_minus_iz(), byproducts[j]);
            if (flip) phases ^= 1ull << j;
          }
        }
        break;
      }
      case Axis::X:
        break;  // isolated vertex only: plain projection, nothing to rewire
    }
    kill(v, basis, res.outcome);
    return res;
  }

  // Stabilizer test for K_Lambda (Lemma-style correlated measurement): measures
  // every support vertex in the local basis component of K_Lambda, the overall
  // sign folded onto the highest-index support vertex.  Returns vertex->outcome.
  std::map<int, int> stabilizer_test(const std::vector<int>& lambda, CoinSource& coin) {
    if (lambda.empty()) throw std::invalid_argument("empty stabilizer test");
    PauliOperator k = PauliOperator::identity(n());
    for (int v : lambda) {
      require_live(v);
      k = multiply(k, correlation_operator(graph, 0, v));
    }
    auto [locals, sigma] = local_components(k);
    std::map<int, int> outcomes;
    int last = -1;
    for (const auto& [v, ax] : locals) last = std::max(last, v);
    for (auto& [v, ax] : locals) {
      SignedAxis basis = ax;
      if (v == last && sigma) basis.neg = !basis.neg;
      outcomes[v] = measure_vertex(v, basis, coin).outcome;
    }
    return outcomes;
  }

  // Full-register stabilizer: live generators conjugated through byproducts,
  // dead vertices pinned to their recorded post-measurement eigenstates.
  StabilizerState to_stabilizer() const {
    std::vector<PauliOperator> gens;
    for (int v = 0; v < n(); v++) {
      if (live(v)) {
        gens.push_back(conjugate_through_byproducts(
            correlation_operator(graph, phases, v)));
      }
    }
    for (const auto& t : tombstones) {
      PauliOperator p = axis_pauli(t.vertex, t.basis.axis);
      if (t.outcome ^ (t.basis.neg ? 1 : 0)) p = p.negated();
      gens.push_back(p);
    }
    return StabilizerState(n(), std::move(gens));
  }

  // Dense reconstruction of the full register (dead qubits included).
  DenseState to_dense() const {
    DenseState s = DenseState::computational(n(), 0);
    const double r2 = 1.0 / std::sqrt(2.0);
    const Mat2 H{{{cd(r2), cd(r2)}, {cd(r2), cd(-r2)}}};
    for (int v = 0; v < n(); v++) {
      if (live(v)) s.apply_1q(v, H);
    }
    for (const auto& t : tombstones) {
      // column 0 = eigenstate of t.basis with eigenvalue (-1)^outcome
      int m = t.outcome ^ (t.basis.neg ? 1 : 0);
      Mat2 u{};
      switch (t.basis.axis) {
        case Axis::Z:
          u = m ? Mat2{{{cd(0), cd(1)}, {cd(1), cd(0)}}}
                : Mat2{{{cd(1), cd(0)}, {cd(0), cd(1)}}};
          break;
        case Axis::X:
          u = Mat2{{{cd(r2), cd(r2)}, {cd(m ? -r2 : r2), cd(m ? r2 : -r2)}}};
          break;
        case Axis::Y:
          u = Mat2{{{cd(r2), cd(r2)}, {cd(0, m ? -r2 : r2), cd(0, m ? r2 : -r2)}}};
          break;
      }
      s.apply_1q(t.vertex, u);
    }
    for (auto [a, b] : graph.edges()) {
      if (live(a) && live(b)) s.apply_cz(a, b);
    }
    s.apply_pauli(PauliOperator(n(), 0, phases & alive, 0));
    for (int v = 0; v < n(); v++) {
      if (live(v) && !byproducts[v].is_identity()) {
        s.apply_1q(v, clifford_matrix(byproducts[v]));
      }
    }
    return s;
  }

  PauliOperator conjugate_through_byproducts(const PauliOperator& p) const {
    int y_in = std::popcount(p.x_bits & p.z_bits);
    int p_eff = ((p.phase - y_in) % 4 + 4) % 4;  // coefficient relative to letters
    uint64_t x = 0, z = 0;
    bool flip = false;
    for (int q = 0; q < n(); q++) {
      bool xb = (p.x_bits >> q) & 1, zb = (p.z_bits >> q) & 1;
      if (!xb && !zb) continue;
      Axis a = xb ? (zb ? Axis::Y : Axis::X) : Axis::Z;
      SignedAxis im = byproducts[q].img({a, false});
      if (im.neg) flip = !flip;
      if (im.axis != Axis::Z) x |= 1ull << q;
      if (im.axis != Axis::X) z |= 1ull << q;
    }
    int y_out = std::popcount(x & z);
    int ph = (p_eff + (flip ? 2 : 0) + y_out) % 4;
    return PauliOperator(p.n, x, z, ph);
  }

 private:
  PauliOperator axis_pauli(int v, Axis a) const {
    switch (a) {
      case Axis::X: return PauliOperator::single_x(n(), v);
      case Axis::Y: return PauliOperator::single_y(n(), v);
      case Axis::Z: return PauliOperator::single_z(n(), v);
    }
    throw std::logic_error("unreachable");
  }

  // X_v on the graph-basis part toggles neighbor phases; Z_v toggles r_v.
  void apply_graph_pauli(int v, Axis a) {
    if (a != Axis::X) phases ^= 1ull << v;
    if (a != Axis::Z) {
      uint64_t nbrs = graph.neighbors(v) & alive;
      phases ^= nbrs;
    }
  }

  static void clear_vertex(Graph& g, int v) {
    uint64_t bit = 1ull << v;
    for (int j = 0; j < g.n; j++) g.adj[j] &= ~bit;
    g.adj[v] = 0;
  }

  void kill(int v, SignedAxis basis, int outcome) {
    clear_vertex(graph, v);
    alive &= ~(1ull << v);
    phases &= ~(1ull << v);
    byproducts[v] = Clifford1Q{};
    tombstones.push_back({v, basis, outcome});
  }

  // Decompose a Pauli into per-qubit positive axes plus an overall sign bit.
  std::pair<std::vector<std::pair<int, SignedAxis>>, int> local_components(
      const PauliOperator& p) const {
    int y_count = std::popcount(p.x_bits & p.z_bits);
    int eff = ((p.phase - y_count) % 4 + 4) % 4;
    if (eff & 1) throw std::logic_error("non-Hermitian stabilizer element");
    std::vector<std::pair<int, SignedAxis>> locals;
    for (int q = 0; q < n(); q++) {
      bool xb = (p.x_bits >> q) & 1, zb = (p.z_bits >> q) & 1;
      if (!xb && !zb) continue;
      Axis a = xb ? (zb ? Axis::Y : Axis::X) : Axis::Z;
      locals.push_back({q, SignedAxis{a, false}});
    }
    return {locals, eff == 2 ? 1 : 0};
  }
};

}  // namespace tripleforge
