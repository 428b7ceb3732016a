#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tripleforge/backend.hpp"
#include "tripleforge/coin.hpp"
#include "tripleforge/resource.hpp"

namespace tripleforge {

struct resource_integrity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One step of the triple-extraction protocol.  Measure steps pick their
// basis at execution time from bits the acting party already holds;
// Correct steps apply Z^{m_control} to the target vertex.
struct Step {
  enum Kind { Measure, Correct } kind;
  Party actor;
  int vertex;        // 0-based
  int control = -1;  // Correct only: vertex whose outcome is the exponent

  bool operator==(const Step&) const = default;
};

// The step list in its reference order.  Steps (1)-(3) burn down the arms
// and the tail, step (4) applies the frame corrections, step (5) measures
// the fork.  Vertex numbering here is 0-based (protocol labels minus one).
inline std::vector<Step> canonical_schedule() {
  using enum Step::Kind;
  return {
      {Measure, Party::A, 0},  {Measure, Party::B, 1},  {Measure, Party::R, 2},
      {Measure, Party::B, 3},  {Measure, Party::A, 4},  {Measure, Party::R, 5},
      {Measure, Party::R, 6},  {Measure, Party::B, 7},
      {Correct, Party::B, 8, 1},  {Correct, Party::A, 10, 4},
      {Measure, Party::B, 8},  {Measure, Party::A, 9},  {Measure, Party::A, 10},
      {Measure, Party::R, 11},
  };
}

inline bool is_fork_vertex(int v) { return v >= 8; }

// A schedule is admissible when it is a permutation of the canonical steps
// in which every party finishes its appendage measurements before starting
// its fork measurements, and each correction sits between the measurement
// producing its exponent and the measurement of its target.
inline bool validate_schedule(const std::vector<Step>& schedule, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  auto canon = canonical_schedule();
  if (schedule.size() != canon.size()) return fail("wrong step count");
  std::vector<int> pos(12, -1), cpos(12, -1);
  for (int i = 0; i < (int)schedule.size(); i++) {
    const Step& s = schedule[i];
    bool found = false;
    for (const auto& c : canon) {
      if (c == s) found = true;
    }
    if (!found) return fail("unknown step");
    if (s.kind == Step::Measure) {
      if (pos[s.vertex] >= 0) return fail("duplicate measurement");
      pos[s.vertex] = i;
    } else {
      if (cpos[s.vertex] >= 0) return fail("duplicate correction");
      cpos[s.vertex] = i;
    }
  }
  for (int v = 0; v < 12; v++) {
    if (pos[v] < 0) return fail("missing measurement");
  }
  for (const auto& c : canon) {
    if (c.kind != Step::Correct) continue;
    if (cpos[c.vertex] < 0) return fail("missing correction");
    if (cpos[c.vertex] < pos[c.control]) return fail("correction before its control bit");
    if (cpos[c.vertex] > pos[c.vertex]) return fail("correction after target measured");
  }
  for (const auto& s : canon) {
    if (s.kind != Step::Measure || is_fork_vertex(s.vertex)) continue;
    for (const auto& f : canon) {
      if (f.kind != Step::Measure || !is_fork_vertex(f.vertex)) continue;
      if (f.actor != s.actor) continue;
      if (pos[s.vertex] > pos[f.vertex]) {
        return fail("appendage measurement after own fork measurement");
      }
    }
  }
  return true;
}

struct TripleShares {
  int p = 0, q = 0, s = 0;
  int share_a = 0, share_b = 0, share_r = 0;

  auto operator<=>(const TripleShares&) const = default;
  int reconstruct() const { return share_a ^ share_b ^ share_r; }
};

// The ideal triple functionality: uniform p, q and the shared bit s, plus
// a uniform additive sharing of pq.
inline TripleShares f_td_ideal(CoinSource& coin) {
  TripleShares t;
  t.p = coin.bit();
  t.q = coin.bit();
  t.s = coin.bit();
  t.share_a = coin.bit();
  t.share_b = coin.bit();
  t.share_r = (t.p & t.q) ^ t.share_a ^ t.share_b;
  return t;
}

struct TranscriptEvent {
  Party actor;
  std::string op;  // "measure" | "correct"
  int vertex;      // 1-based in serialized form
  std::string basis;
  int outcome;
};

struct PiAndResult {
  std::array<int, 12> outcomes{};  // m_1..m_12 at indices 0..11
  std::array<SignedAxis, 12> bases{};
  TripleShares shares;
  std::vector<TranscriptEvent> events;

  // the four outcome bits each party sees
  std::array<int, 4> view(Party x) const {
    static const int idx[3][4] = {{0, 4, 9, 10}, {1, 3, 7, 8}, {2, 5, 6, 11}};
    std::array<int, 4> out{};
    for (int k = 0; k < 4; k++) out[k] = outcomes[idx[(int)x][k]];
    return out;
  }
};

inline std::string basis_str(SignedAxis b) {
  std::string s = b.neg ? "-" : "";
  s += b.axis == Axis::X ? "X" : b.axis == Axis::Y ? "Y" : "Z";
  return s;
}

inline SignedAxis basis_from_str(const std::string& s) {
  SignedAxis b;
  size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    b.neg = s[i] == '-';
    i++;
  }
  if (i + 1 != s.size()) throw std::invalid_argument("bad basis string");
  switch (s[i]) {
    case 'X': b.axis = Axis::X; break;
    case 'Y': b.axis = Axis::Y; break;
    case 'Z': b.axis = Axis::Z; break;
    default: throw std::invalid_argument("bad basis string");
  }
  return b;
}

// Basis for a measurement step, resolved from the bits the acting party
// already holds.  Appendage bases are fixed; fork bases are conditional.
inline SignedAxis step_basis(int vertex, const std::array<int, 12>& m) {
  const SignedAxis Zb{Axis::Z, false}, Xb{Axis::X, false}, Yb{Axis::Y, false};
  switch (vertex) {
    case 0: case 2: case 3: case 5: case 7: return Zb;
    case 1: case 4: case 6: return Xb;
    case 8: return m[7] ? Yb : Zb;    // B: s ? Y : Z
    case 9: return m[0] ? Yb : Zb;    // A: p ? Y : Z
    case 10: return m[0] ? -Yb : Zb;  // A: p ? -Y : Z
    case 11: return m[6] ? Yb : Xb;   // R: s ? Y : X
  }
  throw std::out_of_range("bad vertex");
}

// Runs the full triple-extraction protocol on a backend holding the
// 12-qubit resource.  With strict=true the cross-party outcome identities
// (m1=m2^m3, m4=m5^m6, m7=m8) are asserted; certification runs disable
// this to report failures instead.
inline PiAndResult run_pi_and(MeasurementBackend& backend, CoinSource& coin,
                              const std::vector<Step>& schedule = canonical_schedule(),
                              bool strict = true) {
  if (backend.qubits() != 12) throw std::invalid_argument("backend is not a 12-qubit resource");
  std::string why;
  if (!validate_schedule(schedule, &why)) {
    throw std::invalid_argument("inadmissible schedule: " + why);
  }
  PiAndResult r;
  std::array<int, 12> m{};
  m.fill(-1);
  for (const Step& st : schedule) {
    if (st.kind == Step::Correct) {
      int e = m[st.control];
      backend.apply_z(st.vertex, e);
      r.events.push_back({st.actor, "correct", st.vertex + 1, "Z", e});
      continue;
    }
    SignedAxis b = step_basis(st.vertex, m);
    MeasureResult res = backend.measure(st.vertex, b, coin);
    m[st.vertex] = res.outcome;
    r.bases[st.vertex] = b;
    r.events.push_back({st.actor, "measure", st.vertex + 1, basis_str(b), res.outcome});
  }
  r.outcomes = m;
  if (strict) {
    if (m[0] != (m[1] ^ m[2]) || m[3] != (m[4] ^ m[5]) || m[6] != m[7]) {
      throw resource_integrity_error("outcome identities violated: resource is not the certified state");
    }
  }
  r.shares.p = m[0];
  r.shares.q = m[3];
  r.shares.s = m[6];
  r.shares.share_a = m[9] ^ m[10];
  r.shares.share_b = m[8];
  r.shares.share_r = m[11];
  return r;
}

inline nlohmann::json transcript_to_json(const PiAndResult& r, const std::string& session,
                                         uint64_t seed, const std::string& backend_id) {
  nlohmann::json j;
  j["session"] = session;
  j["seed"] = seed;
  j["backend"] = backend_id;
  auto events = nlohmann::json::array();
  for (const auto& e : r.events) {
    events.push_back({{"actor", party_name(e.actor)},
                      {"op", e.op},
                      {"vertex", e.vertex},
                      {"basis", e.basis},
                      {"outcome", e.outcome}});
  }
  j["events"] = events;
  j["shares"] = {{"p", r.shares.p},     {"q", r.shares.q},     {"s", r.shares.s},
                 {"A", r.shares.share_a}, {"B", r.shares.share_b}, {"R", r.shares.share_r}};
  return j;
}

// Exhaustively walks every coin branch of f (which must consume coins
// deterministically) and tallies an exact dyadic distribution of its keys.
template <typename K, typename F>
Distribution<K> enumerate_distribution(F&& f) {
  Distribution<K> dist;
  for_each_branch([&](ScriptedCoin& coin) {
    K key = f(coin);
    dist.add(key, (int)coin.bits.size());
  });
  if (!dist.complete()) throw std::logic_error("branch enumeration lost probability mass");
  return dist;
}

inline Distribution<TripleShares> enumerate_pi_and(
    const GraphBasisState& resource, const std::string& backend_id,
    const std::vector<Step>& schedule = canonical_schedule()) {
  return enumerate_distribution<TripleShares>([&](CoinSource& coin) {
    auto backend = make_backend(backend_id, resource);
    return run_pi_and(*backend, coin, schedule).shares;
  });
}

// True iff every admissible schedule produces the same exact distribution
// over (outcomes, shares).  Inadmissible schedules are rejected up front.
inline bool interleaving_check(const GraphBasisState& resource, const std::string& backend_id,
                               const std::vector<std::vector<Step>>& schedules) {
  if (schedules.empty()) return true;
  using Key = std::pair<std::array<int, 12>, TripleShares>;
  std::optional<Distribution<Key>> reference;
  for (const auto& schedule : schedules) {
    std::string why;
    if (!validate_schedule(schedule, &why)) {
      throw std::invalid_argument("inadmissible schedule: " + why);
    }
    auto dist = enumerate_distribution<Key>([&](CoinSource& coin) {
      auto backend = make_backend(backend_id, resource);
      auto r = run_pi_and(*backend, coin, schedule);
      return Key{r.outcomes, r.shares};
    });
    if (!reference) {
      reference = std::move(dist);
    } else if (!(*reference == dist)) {
      return false;
    }
  }
  return true;
}

}  // namespace tripleforge
