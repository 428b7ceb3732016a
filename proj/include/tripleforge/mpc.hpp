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

// The classical online layer: additive sharing over an ideal broadcast
// channel, Beaver openings fed by multiplication triples, oblivious
// transfer, N-party conjunctions and ANF evaluation, plus the two
// pre-protocol baselines.

struct mpc_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdditiveShare {
  std::map<std::string, int> bits;  // holder -> bit

  int reconstruct() const {
    int v = 0;
    for (const auto& [holder, b] : bits) v ^= b;
    return v;
  }

  void absorb(const std::string& holder, int b) { bits[holder] ^= b; }
};

inline AdditiveShare xor_shares(const AdditiveShare& a, const AdditiveShare& b) {
  AdditiveShare out = a;
  for (const auto& [holder, bit] : b.bits) out.bits[holder] ^= bit;
  return out;
}

// An ideal public channel: anyone can listen, nobody can modify.  Posts
// within a round are buffered and published together, so no party can
// rush on another's message from the same round.
class BroadcastChannel {
 public:
  struct Message {
    std::string sender;
    std::string tag;
    int bit;
  };

  void post(const std::string& sender, const std::string& tag, int bit) {
    pending_.push_back({sender, tag, bit & 1});
  }

  void commit_round() {
    rounds_.push_back(std::move(pending_));
    pending_.clear();
  }

  int read(const std::string& tag) const {
    for (const auto& round : rounds_) {
      for (const auto& msg : round) {
        if (msg.tag == tag) return msg.bit;
      }
    }
    throw mpc_error("no committed message tagged " + tag);
  }

  int round_count() const { return (int)rounds_.size(); }
  const std::vector<std::vector<Message>>& rounds() const { return rounds_; }

  // canonical serialization of the full history, for the eavesdropper
  std::string log_string() const {
    std::string s;
    for (const auto& round : rounds_) {
      for (const auto& msg : round) {
        s += msg.sender + ":" + msg.tag + "=" + char('0' + msg.bit) + ";";
      }
      s += "|";
    }
    return s;
  }

  nlohmann::json to_json() const {
    auto rounds = nlohmann::json::array();
    for (const auto& round : rounds_) {
      auto r = nlohmann::json::array();
      for (const auto& msg : round) {
        r.push_back({{"sender", msg.sender}, {"tag", msg.tag}, {"bit", msg.bit}});
      }
      rounds.push_back(r);
    }
    return {{"rounds", rounds}};
  }

 private:
  std::vector<std::vector<Message>> rounds_;
  std::vector<Message> pending_;
};

// A queue of triples, each bound to the pair of parties that plays the
// p/q roles (the helper R always holds the third share).  Every triple is
// handed out at most once and opened at most once.
class TripleSupply {
 public:
  struct Slot {
    TripleShares t;
    std::string pair_key;  // "<p-role>*<q-role>"
    int id;
    bool taken = false;
    bool opened = false;
  };

  static std::string pair_key(const std::string& p_role, const std::string& q_role) {
    return p_role + "*" + q_role;
  }

  void add(const TripleShares& t, const std::string& key) {
    slots_.push_back({t, key, (int)slots_.size(), false, false});
  }

  Slot& take(const std::string& key) {
    for (auto& s : slots_) {
      if (!s.taken && s.pair_key == key) {
        s.taken = true;
        consumed_++;
        return s;
      }
    }
    throw mpc_error("no unused triple bound to pair " + key);
  }

  int consumed() const { return consumed_; }
  int available(const std::string& key) const {
    int n = 0;
    for (const auto& s : slots_) n += (!s.taken && s.pair_key == key) ? 1 : 0;
    return n;
  }

 private:
  std::vector<Slot> slots_;
  int consumed_ = 0;
};

// Source of triples: the ideal functionality, or the actual extraction
// protocol run on a backend.  Swapping providers must not change any
// online distribution.
struct TripleProvider {
  virtual ~TripleProvider() = default;
  virtual TripleShares get(CoinSource& coin) = 0;
  virtual std::string id() const = 0;
};

struct IdealTripleProvider : TripleProvider {
  TripleShares get(CoinSource& coin) override { return f_td_ideal(coin); }
  std::string id() const override { return "ideal"; }
};

// Runs the extraction protocol, memoizing on the 8 coin bits a session
// consumes so exhaustive enumerations replay branches without
// re-simulating.
class PiAndTripleProvider : public TripleProvider {
 public:
  explicit PiAndTripleProvider(GraphBasisState resource = build_g_and_state(),
                               std::string backend_id = "tableau")
      : resource_(std::move(resource)), backend_id_(std::move(backend_id)) {}

  TripleShares get(CoinSource& coin) override {
    std::array<int, 8> key{};
    for (auto& b : key) b = coin.bit();
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    ScriptedCoin replay(std::vector<int>(key.begin(), key.end()));
    auto backend = make_backend(backend_id_, resource_);
    auto res = run_pi_and(*backend, replay);
    if (replay.bits.size() != 8 || replay.pos != 8) {
      throw std::logic_error("protocol session consumed an unexpected number of coins");
    }
    memo_.emplace(key, res.shares);
    return res.shares;
  }

  std::string id() const override { return "piand-" + backend_id_; }
  size_t memo_size() const { return memo_.size(); }

 private:
  GraphBasisState resource_;
  std::string backend_id_;
  std::map<std::array<int, 8>, TripleShares> memo_;
};

// One Beaver opening: the p-role party holds a, the q-role party holds b.
// Openings are posted into the current round; shares are assembled after
// the round commits.  If the helper's triple share was publicly opened
// beforehand, its component is absorbed by the q-role party instead.
class BeaverMul {
 public:
  BeaverMul(int a, std::string holder_a, int b, std::string holder_b, std::string holder_r,
            TripleSupply::Slot& slot, std::string tag)
      : a_(a & 1), b_(b & 1), ha_(std::move(holder_a)), hb_(std::move(holder_b)),
        hr_(std::move(holder_r)), slot_(&slot), tag_(std::move(tag)) {
    if (slot.opened) throw mpc_error("triple " + std::to_string(slot.id) + " already opened");
    slot.opened = true;
  }

  void post_openings(BroadcastChannel& ch) const {
    ch.post(ha_, tag_ + ".ca", a_ ^ slot_->t.p);
    ch.post(hb_, tag_ + ".cb", b_ ^ slot_->t.q);
  }

  AdditiveShare collect(const BroadcastChannel& ch, bool r_share_public = false) const {
    int ca = ch.read(tag_ + ".ca");
    int cb = ch.read(tag_ + ".cb");
    int cc = ca & cb;
    AdditiveShare out;
    out.bits[ha_] = cc ^ (cb & slot_->t.p) ^ slot_->t.share_a;
    out.bits[hb_] = cc ^ (ca & slot_->t.q) ^ slot_->t.share_b;
    int r_part = cc ^ slot_->t.share_r;
    if (r_share_public) {
      out.bits[hb_] ^= r_part;  // absorbed by the q-role party
    } else {
      out.bits[hr_] = r_part;
    }
    return out;
  }

 private:
  int a_, b_;
  std::string ha_, hb_, hr_;
  TripleSupply::Slot* slot_;
  std::string tag_;
};

inline AdditiveShare beaver_open_and_multiply(int a, const std::string& holder_a, int b,
                                              const std::string& holder_b,
                                              const std::string& holder_r,
                                              TripleSupply::Slot& slot, BroadcastChannel& ch,
                                              const std::string& tag = "beaver") {
  BeaverMul mul(a, holder_a, b, holder_b, holder_r, slot, tag);
  mul.post_openings(ch);
  ch.commit_round();
  return mul.collect(ch);
}

// 1-out-of-2 oblivious transfer: the sender holds (a0, a1), the receiver
// a choice bit b, and together with the helper they evaluate
// f = a0(b^1) ^ a1 b as two parallel Beaver openings.  Only the sender
// and the helper open their shares of f, so only the receiver learns it.
struct OtResult {
  int received = 0;
  int rounds = 0;
  int triples = 0;
};

inline OtResult ot_1of2(int a0, int a1, int b, const std::string& sender,
                        const std::string& receiver, const std::string& helper,
                        TripleSupply& supply, BroadcastChannel& ch) {
  int before_rounds = ch.round_count(), before_triples = supply.consumed();
  std::string key = TripleSupply::pair_key(sender, receiver);
  auto& slot0 = supply.take(key);
  auto& slot1 = supply.take(key);
  BeaverMul m0(a0, sender, b ^ 1, receiver, helper, slot0, "ot.t0");
  BeaverMul m1(a1, sender, b, receiver, helper, slot1, "ot.t1");
  m0.post_openings(ch);
  m1.post_openings(ch);
  ch.commit_round();
  AdditiveShare f = xor_shares(m0.collect(ch), m1.collect(ch));
  ch.post(sender, "ot.f." + sender, f.bits.at(sender));
  ch.post(helper, "ot.f." + helper, f.bits.at(helper));
  ch.commit_round();
  OtResult out;
  out.received = f.bits.at(receiver) ^ ch.read("ot.f." + sender) ^ ch.read("ot.f." + helper);
  out.rounds = ch.round_count() - before_rounds;
  out.triples = supply.consumed() - before_triples;
  return out;
}

inline OtResult ot_1of2(int a0, int a1, int b, TripleSupply& supply, BroadcastChannel& ch) {
  return ot_1of2(a0, a1, b, "A", "B", "R", supply, ch);
}

// Triple pair keys a conjunction over the named parties needs, in
// consumption order: level k multiplies each earlier party's share by
// party k's input.
inline std::vector<std::string> conj_triple_keys(const std::vector<std::string>& names) {
  std::vector<std::string> keys;
  for (size_t k = 1; k < names.size(); k++) {
    for (size_t j = 0; j < k; j++) keys.push_back(TripleSupply::pair_key(names[j], names[k]));
  }
  return keys;
}

inline void fill_for_conj(TripleSupply& supply, const std::vector<std::string>& names,
                          TripleProvider& provider, CoinSource& coin) {
  for (const auto& key : conj_triple_keys(names)) supply.add(provider.get(coin), key);
}

// N-party conjunction by inductive promotion.  The helper opens its
// shares of every intermediate level's triples up front, so intermediate
// products stay shared among the input parties only; the final level
// keeps the helper's share private.  Online rounds: N-1 opening rounds,
// plus the single helper round when N >= 3.
struct ConjResult {
  AdditiveShare share;
  int triples = 0;
  int rounds = 0;
};

inline ConjResult conj_parties(const std::vector<std::pair<std::string, int>>& inputs,
                               const std::string& helper, TripleSupply& supply,
                               BroadcastChannel& ch, const std::string& tag = "conj") {
  size_t n = inputs.size();
  if (n == 0) throw mpc_error("empty conjunction");
  int before_rounds = ch.round_count(), before_triples = supply.consumed();
  ConjResult out;
  if (n == 1) {
    out.share.bits[inputs[0].first] = inputs[0].second & 1;
    return out;
  }
  // take every triple up front; levels 2..n-1 are intermediate
  std::vector<std::vector<TripleSupply::Slot*>> slots(n);
  for (size_t k = 1; k < n; k++) {
    for (size_t j = 0; j < k; j++) {
      slots[k].push_back(&supply.take(TripleSupply::pair_key(inputs[j].first, inputs[k].first)));
    }
  }
  if (n >= 3) {
    for (size_t k = 1; k + 1 < n; k++) {
      for (size_t j = 0; j < k; j++) {
        ch.post(helper, tag + ".r." + std::to_string(k) + "." + std::to_string(j),
                slots[k][j]->t.share_r);
      }
    }
    ch.commit_round();
  }
  AdditiveShare cur;
  cur.bits[inputs[0].first] = inputs[0].second & 1;
  for (size_t k = 1; k < n; k++) {
    bool intermediate = k + 1 < n;
    std::vector<BeaverMul> muls;
    muls.reserve(k);
    for (size_t j = 0; j < k; j++) {
      muls.emplace_back(cur.bits.at(inputs[j].first), inputs[j].first, inputs[k].second,
                        inputs[k].first, helper, *slots[k][j],
                        tag + ".m." + std::to_string(k) + "." + std::to_string(j));
    }
    for (const auto& m : muls) m.post_openings(ch);
    ch.commit_round();
    AdditiveShare next;
    for (const auto& m : muls) next = xor_shares(next, m.collect(ch, intermediate));
    cur = next;
  }
  out.share = cur;
  out.triples = supply.consumed() - before_triples;
  out.rounds = ch.round_count() - before_rounds;
  return out;
}

inline ConjResult conj_n(const std::vector<int>& x, TripleSupply& supply, BroadcastChannel& ch) {
  std::vector<std::pair<std::string, int>> inputs;
  for (size_t i = 0; i < x.size(); i++) inputs.push_back({"P" + std::to_string(i + 1), x[i]});
  return conj_parties(inputs, "R", supply, ch);
}

// ANF evaluation: f is an XOR of terms, each term a list of (party,
// variable) pairs.  Same-party factors inside a term fold locally before
// any triple is touched; the constant term is the empty list.
using AnfTerm = std::vector<std::pair<std::string, std::string>>;

struct AnfResult {
  int value = 0;
  int triples = 0;
  int rounds = 0;
};

// Distinct parties of each term after local folding, in first-appearance
// order; used to pre-provision the triple supply.
inline std::vector<std::vector<std::string>> anf_term_parties(const std::vector<AnfTerm>& terms) {
  std::vector<std::vector<std::string>> out;
  for (const auto& term : terms) {
    std::vector<std::string> parties;
    for (const auto& [party, var] : term) {
      if (party.empty() || var.empty()) throw mpc_error("malformed ANF term");
      bool seen = false;
      for (const auto& p : parties) seen = seen || p == party;
      if (!seen) parties.push_back(party);
    }
    if (parties.size() >= 2) out.push_back(parties);
  }
  return out;
}

inline void fill_for_anf(TripleSupply& supply, const std::vector<AnfTerm>& terms,
                         TripleProvider& provider, CoinSource& coin) {
  for (const auto& parties : anf_term_parties(terms)) {
    fill_for_conj(supply, parties, provider, coin);
  }
}

inline AnfResult eval_anf(const std::vector<AnfTerm>& terms,
                          const std::map<std::string, std::map<std::string, int>>& inputs,
                          TripleSupply& supply, BroadcastChannel& ch,
                          const std::string& helper = "R") {
  int before_rounds = ch.round_count(), before_triples = supply.consumed();
  auto lookup = [&](const std::string& party, const std::string& var) {
    auto pit = inputs.find(party);
    if (pit == inputs.end()) throw mpc_error("no inputs for party " + party);
    auto vit = pit->second.find(var);
    if (vit == pit->second.end()) throw mpc_error("party " + party + " has no input " + var);
    return vit->second & 1;
  };
  AdditiveShare total;
  int term_id = 0;
  for (const auto& term : terms) {
    // fold each party's factors locally (x*x = x)
    std::vector<std::pair<std::string, int>> folded;
    for (const auto& [party, var] : term) {
      if (party.empty() || var.empty()) throw mpc_error("malformed ANF term");
      int bit = lookup(party, var);
      bool found = false;
      for (auto& [p, b] : folded) {
        if (p == party) {
          b &= bit;
          found = true;
        }
      }
      if (!found) folded.push_back({party, bit});
    }
    if (folded.empty()) {
      total.absorb(helper, 1);  // constant term
    } else if (folded.size() == 1) {
      total.absorb(folded[0].first, folded[0].second);
    } else {
      auto conj = conj_parties(folded, helper, supply, ch, "anf.t" + std::to_string(term_id));
      total = xor_shares(total, conj.share);
    }
    term_id++;
  }
  // final reconstruction round
  for (const auto& [holder, bit] : total.bits) {
    ch.post(holder, "anf.open." + holder, bit);
  }
  ch.commit_round();
  AnfResult out;
  out.value = total.reconstruct();
  out.triples = supply.consumed() - before_triples;
  out.rounds = ch.round_count() - before_rounds;
  return out;
}

// Trusted-dealer baseline: a dealer samples the whole triple and sends
// each party its part over private channels (nothing broadcast).
inline TripleShares ctd_dealer_baseline(CoinSource& coin) {
  TripleShares t;
  t.p = coin.bit();
  t.q = coin.bit();
  t.s = coin.bit();
  t.share_a = coin.bit();
  t.share_b = coin.bit();
  t.share_r = (t.p & t.q) ^ t.share_a ^ t.share_b;
  return t;
}

// Key-pad baseline: pre-shared keys from ideal Bell pairs, with the
// helper sampling (x, y, xy) and broadcasting one-time-padded bits.  The
// re-pad as originally described sets [pq]_A = [xy]_A ^ k and
// [pq]_B = [xy]_B ^ k, which does not reconstruct (x^k)(y^k); the
// corrected form re-pads with k(x^1) on the A side and k*y on the B
// side.  Both are available so the discrepancy can be demonstrated.
struct QkdTdResult {
  TripleShares triple;
  int x = 0, y = 0, k = 0;
  bool consistent = false;  // share XOR equals p*q
};

inline QkdTdResult qkd_td_baseline(CoinSource& coin, BroadcastChannel* ch = nullptr,
                                   bool as_written = false) {
  int k = coin.bit();  // key shared by A and B
  int x = coin.bit(), y = coin.bit();
  int xa = coin.bit(), xb = coin.bit();
  int xr = (x & y) ^ xa ^ xb;
  int s = coin.bit();                                            // key shared by B and R
  int r1 = coin.bit(), r2 = coin.bit(), r3 = coin.bit(), r4 = coin.bit();  // R's send pads
  if (ch) {
    ch->post("R", "qkd.x", x ^ r1);
    ch->post("R", "qkd.xa", xa ^ r2);
    ch->post("R", "qkd.y", y ^ r3);
    ch->post("R", "qkd.xb", xb ^ r4);
    ch->commit_round();
  }
  QkdTdResult out;
  out.x = x;
  out.y = y;
  out.k = k;
  TripleShares& t = out.triple;
  t.p = x ^ k;
  t.q = y ^ k;
  t.s = s;
  t.share_a = as_written ? (xa ^ k) : (xa ^ (k & (x ^ 1)));
  t.share_b = as_written ? (xb ^ k) : (xb ^ (k & y));
  t.share_r = xr;
  out.consistent = t.reconstruct() == (t.p & t.q);
  return out;
}

// For every input bit of an exhaustively enumerated session, the exact
// conditional distribution given the broadcast log.  run(inputs, coin)
// must return the log; inputs are uniform a priori.
struct LeakageReport {
  struct BitEntry {
    std::string name;
    bool uniform = true;
    std::string witness;
  };
  std::vector<BitEntry> bits;

  bool all_uniform() const {
    for (const auto& e : bits) {
      if (!e.uniform) return false;
    }
    return true;
  }
};

template <typename RunFn>
LeakageReport eavesdropper_leakage_report(const std::vector<std::string>& input_names,
                                          RunFn&& run) {
  int n = (int)input_names.size();
  struct Leaf {
    std::string log;
    std::vector<int> inputs;
    int depth;
  };
  std::vector<Leaf> leaves;
  int max_depth = 0;
  for (int assignment = 0; assignment < (1 << n); assignment++) {
    std::vector<int> inputs(n);
    for (int i = 0; i < n; i++) inputs[i] = (assignment >> i) & 1;
    for_each_branch([&](ScriptedCoin& coin) {
      std::string log = run(inputs, coin);
      int depth = n + (int)coin.bits.size();
      max_depth = std::max(max_depth, depth);
      leaves.push_back({std::move(log), inputs, depth});
    });
  }
  LeakageReport rep;
  for (int i = 0; i < n; i++) {
    LeakageReport::BitEntry e{input_names[i], true, ""};
    std::map<std::string, std::pair<uint64_t, uint64_t>> tally;  // log -> (total, zeros)
    for (const auto& leaf : leaves) {
      uint64_t w = 1ull << (max_depth - leaf.depth);
      auto& [total, zeros] = tally[leaf.log];
      total += w;
      if (leaf.inputs[i] == 0) zeros += w;
    }
    for (const auto& [log, tz] : tally) {
      if (2 * tz.second != tz.first) {
        e.uniform = false;
        e.witness = "bias on log " + log;
        break;
      }
    }
    rep.bits.push_back(std::move(e));
  }
  return rep;
}

}  // namespace tripleforge
