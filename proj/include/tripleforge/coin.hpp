#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "tripleforge/pauli.hpp"

namespace tripleforge {

struct SeededCoin : CoinSource {
  std::mt19937_64 rng;
  explicit SeededCoin(uint64_t seed) : rng(seed) {}
  int bit() override { return (int)(rng() & 1); }
};

// Replays a fixed prefix of bits, then extends with zeros while recording
// how many bits were consumed.  The exhaustive driver below uses this to
// walk every branch of a randomized computation.
struct ScriptedCoin : CoinSource {
  std::vector<int> bits;
  size_t pos = 0;
  explicit ScriptedCoin(std::vector<int> prefix = {}) : bits(std::move(prefix)) {}
  int bit() override {
    if (pos < bits.size()) return bits[pos++];
    bits.push_back(0);
    pos++;
    return 0;
  }
};

// Calls f once per branch of its coin consumption, depth-first.  f receives
// the coin and must be a deterministic function of the bits it draws.
// Each leaf has probability 2^-depth where depth = bits consumed.
template <typename F>
void for_each_branch(F&& f) {
  std::vector<int> script;
  while (true) {
    ScriptedCoin coin(script);
    f(coin);
    script = std::move(coin.bits);
    // advance to the next leaf in binary-counter order
    int i = (int)script.size() - 1;
    while (i >= 0 && script[i] == 1) i--;
    if (i < 0) break;
    script[i] = 1;
    script.resize(i + 1);
  }
}

// Exact dyadic distribution over keys of type K.  Weights are kept as
// integer numerators over a common power-of-two denominator so equality
// checks are exact.
template <typename K>
class Distribution {
 public:
  void add(const K& key, int depth) {
    if (depth > max_depth_) {
      uint64_t scale = 1ull << (depth - max_depth_);
      for (auto& [k, w] : weights_) w *= scale;
      max_depth_ = depth;
    }
    weights_[key] += 1ull << (max_depth_ - depth);
  }

  // Total mass should be 2^max_depth once a complete branch set was added.
  bool complete() const {
    uint64_t total = 0;
    for (const auto& [k, w] : weights_) total += w;
    return total == (1ull << max_depth_);
  }

  void normalize() {
    while (max_depth_ > 0) {
      bool all_even = true;
      for (const auto& [k, w] : weights_) {
        if (w & 1) {
          all_even = false;
          break;
        }
      }
      if (!all_even) break;
      for (auto& [k, w] : weights_) w >>= 1;
      max_depth_--;
    }
  }

  bool operator==(const Distribution& o) const {
    Distribution a = *this, b = o;
    a.normalize();
    b.normalize();
    return a.max_depth_ == b.max_depth_ && a.weights_ == b.weights_;
  }

  const std::map<K, uint64_t>& weights() const { return weights_; }
  int denominator_log2() const { return max_depth_; }

  bool uniform() const {
    if (weights_.empty()) return false;
    uint64_t w0 = weights_.begin()->second;
    for (const auto& [k, w] : weights_) {
      if (w != w0) return false;
    }
    return true;
  }

 private:
  std::map<K, uint64_t> weights_;
  int max_depth_ = 0;
};

}  // namespace tripleforge
