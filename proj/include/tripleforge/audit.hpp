#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tripleforge/backend.hpp"
#include "tripleforge/coin.hpp"
#include "tripleforge/protocol.hpp"
#include "tripleforge/resource.hpp"

namespace tripleforge {

// Privacy against a single malicious party: residual stabilizers of the
// corrupted party's qubits, the joint-measurement attack, cq-state
// marginals, the ideal-world simulator, and the real-vs-ideal comparison.

struct unsupported_by_theorem : std::logic_error {
  using std::logic_error::logic_error;
};

// Runs the protocol schedule with one party sitting out entirely: no
// measurements, no corrections.  Returns the outcome array with -1 at the
// corrupted party's vertices.
inline std::array<int, 12> run_honest_pair(MeasurementBackend& backend, Party corrupted,
                                           CoinSource& coin) {
  std::array<int, 12> m{};
  m.fill(-1);
  for (const Step& st : canonical_schedule()) {
    if (st.actor == corrupted) continue;
    if (st.kind == Step::Correct) {
      backend.apply_z(st.vertex, m[st.control]);
      continue;
    }
    m[st.vertex] = backend.measure(st.vertex, step_basis(st.vertex, m), coin).outcome;
  }
  return m;
}

struct ResidualStabilizer {
  Party corrupted;
  std::array<PauliOperator, 4> generators;  // supported on the corrupted party's 4 qubits
};

// The stabilizer of the corrupted party's qubits once both honest parties
// have finished all their measurements, the corrupted party having applied
// none of its own corrections.  Generator phases are XOR formulas over the
// honest outcomes.  Outcome indices are 0-based (m[0] is m_1).
inline ResidualStabilizer residual_stabilizer(Party corrupted, const std::array<int, 12>& m) {
  const int n = 12;
  // i^{#Y} times the XZ letters keeps each generator Hermitian
  auto pauli = [&](uint64_t x, uint64_t z, int sign) {
    return PauliOperator(n, x, z, ((sign ? 2 : 0) + std::popcount(x & z)) % 4);
  };
  auto bit = [&](int v) {
    if (m[v] < 0) throw std::logic_error("formula references an unmeasured outcome");
    return m[v] & 1;
  };
  ResidualStabilizer rs{corrupted, {}};
  switch (corrupted) {
    case Party::A: {
      // qubits 1,5,10,11 (0-based 0,4,9,10)
      int p = bit(1) ^ bit(2), q = bit(3), s = bit(6);
      rs.generators[0] = pauli(0, 1ull << 0, p);
      rs.generators[1] = pauli(1ull << 4, 0, q ^ bit(5));
      rs.generators[2] = pauli((1ull << 9) | (1ull << 10), 0, bit(5) ^ s);
      rs.generators[3] = pauli(0, (1ull << 9) | (1ull << 10), (p & s) ^ bit(8) ^ bit(11));
      break;
    }
    case Party::B: {
      // qubits 2,4,8,9 (0-based 1,3,7,8)
      int p = bit(0), q = bit(4) ^ bit(5), s = bit(6);
      rs.generators[0] = pauli(1ull << 1, 0, p ^ bit(2));
      rs.generators[1] = pauli(0, 1ull << 3, q);
      rs.generators[2] = pauli(0, 1ull << 7, s);
      int c = (p & (q ^ s)) ^ (bit(2) & s) ^ bit(9) ^ bit(10) ^ bit(11);
      rs.generators[3] = s ? pauli(1ull << 8, 1ull << 8, c) : pauli(0, 1ull << 8, c);
      break;
    }
    case Party::R: {
      // qubits 3,6,7,12 (0-based 2,5,6,11)
      int p = bit(0), q = bit(3), s = bit(7);
      rs.generators[0] = pauli(0, 1ull << 2, p ^ bit(1));
      rs.generators[1] = pauli(0, 1ull << 5, q ^ bit(4));
      rs.generators[2] = pauli(1ull << 6, 0, s);
      int c = (p & q) ^ bit(8) ^ bit(9) ^ bit(10);
      rs.generators[3] = s ? pauli(1ull << 11, 1ull << 11, c) : pauli(1ull << 11, 0, c);
      break;
    }
  }
  return rs;
}

// Corrupting two parties puts us outside the honest-pair assumption; the
// protocol breaks in trivial ways there, so the query is refused.
inline ResidualStabilizer residual_stabilizer(const std::set<Party>& corrupted,
                                              const std::array<int, 12>& m) {
  if (corrupted.size() != 1) {
    throw unsupported_by_theorem(
        "privacy holds only against a single corrupted party; with two corrupted "
        "parties the remaining honest party has no protection");
  }
  return residual_stabilizer(*corrupted.begin(), m);
}

// A follows the protocol through the corrections, then measures the joint
// observable X10 X11 instead of its two separate fork measurements.  The
// other parties proceed honestly.
struct AttackRun {
  int attack_outcome = -1;
  bool attack_deterministic = false;
  std::array<int, 12> outcomes{};  // -1 at A's unmeasured fork vertices
};

inline AttackRun astar_joint_attack(MeasurementBackend& backend, CoinSource& coin) {
  AttackRun out;
  out.outcomes.fill(-1);
  std::array<int, 12>& m = out.outcomes;
  for (const Step& st : canonical_schedule()) {
    if (st.kind == Step::Correct) {
      backend.apply_z(st.vertex, m[st.control]);
      continue;
    }
    if (st.vertex == 9) {
      PauliOperator joint(12, (1ull << 9) | (1ull << 10), 0, 0);
      MeasureResult res = backend.measure_pauli(joint, coin);
      out.attack_outcome = res.outcome;
      out.attack_deterministic = res.deterministic;
      continue;
    }
    if (st.vertex == 10) continue;  // replaced by the joint measurement
    m[st.vertex] = backend.measure(st.vertex, step_basis(st.vertex, m), coin).outcome;
  }
  return out;
}

// Checks that, averaged over all honest branches, the corrupted party's
// 4-qubit marginal is exactly I/16: every nonidentity Pauli on those
// qubits has weighted expectation zero.  Exact dyadic arithmetic.
struct CqMarginalReport {
  Party corrupted;
  bool maximally_mixed = true;
  std::string witness;
};

inline CqMarginalReport cq_marginal(Party corrupted, const ResourceSpec& spec) {
  CqMarginalReport rep{corrupted, true, ""};
  const auto& own = spec.ownership[(int)corrupted];
  struct Leaf {
    StabilizerState state;
    int depth;
  };
  std::vector<Leaf> leaves;
  int max_depth = 0;
  for_each_branch([&](ScriptedCoin& coin) {
    TableauBackend backend{GraphBasisState(spec.graph, 0)};
    run_honest_pair(backend, corrupted, coin);
    int depth = (int)coin.bits.size();
    max_depth = std::max(max_depth, depth);
    leaves.push_back({backend.state, depth});
  });
  // 255 nonidentity Pauli patterns over the party's 4 qubits
  for (int pat = 1; pat < 256 && rep.maximally_mixed; pat++) {
    uint64_t x = 0, z = 0;
    for (int k = 0; k < 4; k++) {
      int letter = (pat >> (2 * k)) & 3;  // 0:I 1:X 2:Z 3:Y
      if (letter & 1) x |= 1ull << own[k];
      if (letter & 2) z |= 1ull << own[k];
    }
    PauliOperator obs(12, x, z, std::popcount(x & z) % 4);
    int64_t sum = 0;
    for (const auto& leaf : leaves) {
      int64_t w = 1ll << (max_depth - leaf.depth);
      switch (leaf.state.contains(obs)) {
        case Sign::Plus: sum += w; break;
        case Sign::Minus: sum -= w; break;
        case Sign::None: break;
      }
    }
    if (sum != 0) {
      rep.maximally_mixed = false;
      rep.witness = "nonzero expectation for " + obs.str();
    }
  }
  return rep;
}

// The ideal-world simulator: given only the corrupted party's outputs from
// the ideal functionality, emit a view and the four residual-stabilizer
// phases.  The sabotage flag corrupts the last emitted bit (dropping A*'s
// p*y cross term, or replacing B*/R*'s share bit with a function of the
// padding coins); it exists purely as a negative control.
struct SimOutput {
  std::array<int, 4> view{};
  std::array<int, 4> phases{};
};

inline SimOutput simulator_S(Party corrupted, const TripleShares& ideal, CoinSource& coin,
                             bool sabotage = false) {
  SimOutput out;
  switch (corrupted) {
    case Party::A: {
      int p = ideal.p, b = ideal.share_a;
      int x = coin.bit(), y = coin.bit();
      out.view = {p, x, b, y};
      out.phases = {p, x, y, sabotage ? b : (b ^ (p & y))};
      break;
    }
    case Party::B: {
      int u = coin.bit(), w = coin.bit();
      out.view = {u, ideal.q, w, sabotage ? (u & w) : ideal.share_b};
      out.phases = out.view;
      break;
    }
    case Party::R: {
      int u1 = coin.bit(), u2 = coin.bit(), u3 = coin.bit();
      out.view = {u1, u2, u3, sabotage ? (u1 & u2) : ideal.share_r};
      out.phases = out.view;
      break;
    }
  }
  return out;
}

// The corrupted party's derived view and residual phases on an honest
// branch, evaluated in the frame where the party has applied its own
// corrections.  View layout per role:
//   A: (p, m5, m10^m11, q^s)   B: (m2, q, s, m9)   R: (m3, m6, m7, m12)
inline SimOutput real_view_and_phases(Party corrupted, const std::array<int, 12>& m) {
  SimOutput out;
  int p = m[0], q = m[3];
  switch (corrupted) {
    case Party::A: {
      int qs = q ^ m[6];
      out.view = {p, m[4], m[9] ^ m[10], qs};
      out.phases = {p, m[4], qs, (p & qs) ^ m[9] ^ m[10]};
      break;
    }
    case Party::B:
      out.view = {m[1], q, m[6], m[8]};
      out.phases = out.view;
      break;
    case Party::R:
      out.view = {m[2], m[5], m[6], m[11]};
      out.phases = out.view;
      break;
  }
  return out;
}

inline std::vector<char> sensitive_bits(Party corrupted) {
  switch (corrupted) {
    case Party::A: return {'q'};
    case Party::B: return {'p'};
    case Party::R: return {'p', 'q'};
  }
  return {};
}

// Compares the joint distribution of (sensitive bits, view, residual
// phases) between the real protocol and the simulator.  Exact dyadic
// weights throughout; the total variation distance is an exact fraction.
struct IndistReport {
  Party corrupted;
  bool tv_zero = false;
  uint64_t tv_numerator = 0;  // distance = tv_numerator / 2^tv_den_log2
  int tv_den_log2 = 0;
  bool conditionals_half = true;  // P(x=0|view)=1/2 for all views, both worlds
  std::string witness;
};

namespace detail {
// key: [sensitive(2, padded), view(4), phases(4)]
using IndistKey = std::array<int, 10>;

inline IndistKey make_key(const std::vector<int>& sens, const SimOutput& vp) {
  IndistKey k{};
  for (size_t i = 0; i < sens.size(); i++) k[i] = sens[i];
  for (int i = 0; i < 4; i++) k[2 + i] = vp.view[i];
  for (int i = 0; i < 4; i++) k[6 + i] = vp.phases[i];
  return k;
}

inline std::vector<int> sensitive_values(Party corrupted, int p, int q) {
  std::vector<int> v;
  for (char c : sensitive_bits(corrupted)) v.push_back(c == 'p' ? p : q);
  return v;
}
}  // namespace detail

inline IndistReport indistinguishability_test(Party corrupted, const ResourceSpec& spec,
                                              bool sabotage = false) {
  IndistReport rep;
  rep.corrupted = corrupted;

  auto real = enumerate_distribution<detail::IndistKey>([&](CoinSource& coin) {
    TableauBackend backend{GraphBasisState(spec.graph, 0)};
    auto r = run_pi_and(backend, coin);
    return detail::make_key(detail::sensitive_values(corrupted, r.shares.p, r.shares.q),
                            real_view_and_phases(corrupted, r.outcomes));
  });
  auto sim = enumerate_distribution<detail::IndistKey>([&](CoinSource& coin) {
    TripleShares ideal = f_td_ideal(coin);
    auto s = simulator_S(corrupted, ideal, coin, sabotage);
    return detail::make_key(detail::sensitive_values(corrupted, ideal.p, ideal.q), s);
  });

  // exact TV distance over a common denominator
  Distribution<detail::IndistKey> a = real, b = sim;
  int da = a.denominator_log2(), db = b.denominator_log2();
  int d = std::max(da, db);
  uint64_t diff_sum = 0;
  std::set<detail::IndistKey> keys;
  for (const auto& [k, w] : a.weights()) keys.insert(k);
  for (const auto& [k, w] : b.weights()) keys.insert(k);
  for (const auto& k : keys) {
    uint64_t wa = 0, wb = 0;
    if (auto it = a.weights().find(k); it != a.weights().end()) wa = it->second << (d - da);
    if (auto it = b.weights().find(k); it != b.weights().end()) wb = it->second << (d - db);
    diff_sum += wa > wb ? wa - wb : wb - wa;
    if (wa != wb && rep.witness.empty()) {
      std::string w = "view/phases ";
      for (int i = 0; i < 10; i++) w += char('0' + k[i]);
      rep.witness = w;
    }
  }
  rep.tv_numerator = diff_sum;
  rep.tv_den_log2 = d + 1;
  rep.tv_zero = diff_sum == 0;

  // per-view conditionals of each sensitive bit, both worlds
  size_t nsens = sensitive_bits(corrupted).size();
  for (const auto* dist : {&a, &b}) {
    std::map<std::array<int, 4>, std::pair<uint64_t, std::array<uint64_t, 2>>> by_view;
    for (const auto& [k, w] : dist->weights()) {
      std::array<int, 4> view{k[2], k[3], k[4], k[5]};
      auto& [total, zeros] = by_view[view];
      total += w;
      for (size_t i = 0; i < nsens; i++) {
        if (k[i] == 0) zeros[i] += w;
      }
    }
    for (const auto& [view, tz] : by_view) {
      for (size_t i = 0; i < nsens; i++) {
        if (2 * tz.second[i] != tz.first) {
          rep.conditionals_half = false;
          if (rep.witness.empty()) {
            rep.witness = "biased sensitive bit given a view";
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace tripleforge
