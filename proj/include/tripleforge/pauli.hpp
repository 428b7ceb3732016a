#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripleforge {

// n-qubit Pauli operator i^phase * prod_j X_j^{x_j} Z_j^{z_j}, phase mod 4.
// Qubits are 0-indexed bit positions; callers that speak 1-based vertex
// labels convert at the boundary.
struct PauliOperator {
  int n = 0;
  uint64_t x_bits = 0;
  uint64_t z_bits = 0;
  int phase = 0;  // exponent of i

  PauliOperator() = default;
  PauliOperator(int n_, uint64_t x, uint64_t z, int ph = 0)
      : n(n_), x_bits(x), z_bits(z), phase(((ph % 4) + 4) % 4) {
    if (n_ < 0 || n_ > 64) {
      throw std::invalid_argument("qubit count out of range");
    }
  }

  static PauliOperator identity(int n) { return PauliOperator(n, 0, 0, 0); }
  static PauliOperator single_x(int n, int q) { return PauliOperator(n, 1ull << q, 0, 0); }
  static PauliOperator single_z(int n, int q) { return PauliOperator(n, 0, 1ull << q, 0); }
  // Y = i * X * Z
  static PauliOperator single_y(int n, int q) {
    return PauliOperator(n, 1ull << q, 1ull << q, 1);
  }

  bool is_identity_bits() const { return x_bits == 0 && z_bits == 0; }

  // P^2 = (-1)^(phase + |x&z|) I; Hermitian iff P^2 = +I and coefficient real.
  bool hermitian() const {
    return ((phase ^ std::popcount(x_bits & z_bits)) & 1) == 0;
  }

  PauliOperator negated() const { return PauliOperator(n, x_bits, z_bits, phase + 2); }

  bool operator==(const PauliOperator& o) const {
    return n == o.n && x_bits == o.x_bits && z_bits == o.z_bits && phase == o.phase;
  }

  // Leading sign over {+, -, +i, -i} followed by letters over {I,X,Y,Z}.
  std::string str() const {
    int y_count = std::popcount(x_bits & z_bits);
    int p = ((phase - y_count) % 4 + 4) % 4;  // i^phase XZ...XZ = i^(phase-#Y) * prod of letters
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    std::string out = prefix[p];
    for (int q = 0; q < n; q++) {
      bool x = (x_bits >> q) & 1, z = (z_bits >> q) & 1;
      out += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return out;
  }

  static PauliOperator from_str(const std::string& s) {
    size_t i = 0;
    int ph = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') ph += 2;
      i++;
      if (i < s.size() && s[i] == 'i') {
        ph += 1;
        i++;
      }
    }
    uint64_t x = 0, z = 0;
    int n = 0;
    for (; i < s.size(); i++, n++) {
      switch (s[i]) {
        case 'I':
        case '_':
          break;
        case 'X':
          x |= 1ull << n;
          break;
        case 'Z':
          z |= 1ull << n;
          break;
        case 'Y':
          x |= 1ull << n;
          z |= 1ull << n;
          ph += 1;  // letter Y stands for iXZ
          break;
        default:
          throw std::invalid_argument("bad pauli letter");
      }
    }
    return PauliOperator(n, x, z, ph);
  }
};

inline bool parity(uint64_t v) { return std::popcount(v) & 1; }

inline PauliOperator multiply(const PauliOperator& p, const PauliOperator& q) {
  if (p.n != q.n) throw std::invalid_argument("pauli dimension mismatch");
  // X^a Z^b * X^c Z^d picks up (-1)^(b & c) commuting Z past X.
  int ph = p.phase + q.phase + 2 * (parity(p.z_bits & q.x_bits) ? 1 : 0);
  return PauliOperator(p.n, p.x_bits ^ q.x_bits, p.z_bits ^ q.z_bits, ph);
}

inline bool commutes(const PauliOperator& p, const PauliOperator& q) {
  if (p.n != q.n) throw std::invalid_argument("pauli dimension mismatch");
  return parity(p.x_bits & q.z_bits) == parity(p.z_bits & q.x_bits);
}

// Source of uniformly random bits; injected so exhaustive drivers can
// replace sampling with systematic branch enumeration.
struct CoinSource {
  virtual ~CoinSource() = default;
  virtual int bit() = 0;
};

struct MeasureResult {
  int outcome = 0;        // eigenvalue (-1)^outcome
  bool deterministic = false;
};

enum class Sign { Plus, Minus, None };

// Stabilizer state given by n independent commuting Hermitian generators.
class StabilizerState {
 public:
  int n = 0;
  std::vector<PauliOperator> generators;

  StabilizerState() = default;
  StabilizerState(int n_, std::vector<PauliOperator> gens)
      : n(n_), generators(std::move(gens)) {
    for (const auto& g : generators) {
      if (g.n != n) throw std::invalid_argument("generator dimension mismatch");
      if (!g.hermitian()) {
        throw std::invalid_argument("generator not Hermitian");
      }
    }
  }

  // +1/-1 if sgn*obs is generated by the stabilizer, None otherwise.
  Sign contains(const PauliOperator& obs) const {
    if (obs.n != n) throw std::invalid_argument("dimension mismatch");
    PauliOperator acc = PauliOperator::identity(n);
    uint64_t tx = obs.x_bits, tz = obs.z_bits;
    auto rows = echelon();
    for (const auto& row : rows) {
      int c = pivot_col(row);
      if (c < 0) continue;
      bool bit = c < 64 ? ((tx >> c) & 1) : ((tz >> (c - 64)) & 1);
      if (bit) {
        tx ^= row.x_bits;
        tz ^= row.z_bits;
        acc = multiply(acc, row);
      }
    }
    if (tx != 0 || tz != 0) return Sign::None;
    int d = ((acc.phase - obs.phase) % 4 + 4) % 4;
    if (d == 0) return Sign::Plus;
    if (d == 2) return Sign::Minus;
    return Sign::None;  // i*obs in group: impossible for Hermitian queries
  }

  // Projective measurement of a Hermitian Pauli observable.
  MeasureResult measure(const PauliOperator& obs, CoinSource& coin) {
    if (obs.n != n) throw std::invalid_argument("dimension mismatch");
    if (!obs.hermitian()) throw std::invalid_argument("observable not Hermitian");
    int pivot = -1;
    for (int i = 0; i < (int)generators.size(); i++) {
      if (!commutes(generators[i], obs)) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) {
      Sign s = contains(obs);
      if (s == Sign::None) {
        throw std::logic_error("observable commutes with all generators but is not in group");
      }
      return {s == Sign::Plus ? 0 : 1, true};
    }
    int m = coin.bit();
    PauliOperator pg = generators[pivot];
    for (int i = 0; i < (int)generators.size(); i++) {
      if (i != pivot && !commutes(generators[i], obs)) {
        generators[i] = multiply(generators[i], pg);
      }
    }
    generators[pivot] = PauliOperator(n, obs.x_bits, obs.z_bits, obs.phase + 2 * m);
    return {m, false};
  }

 private:
  static int pivot_col(const PauliOperator& p) {
    if (p.x_bits) return std::countr_zero(p.x_bits);
    if (p.z_bits) return 64 + std::countr_zero(p.z_bits);
    return -1;
  }

  std::vector<PauliOperator> echelon() const {
    std::vector<PauliOperator> rows = generators;
    size_t r = 0;
    for (int c = 0; c < 128 && r < rows.size(); c++) {
      auto has = [&](const PauliOperator& p) {
        return c < 64 ? ((p.x_bits >> c) & 1) : ((p.z_bits >> (c - 64)) & 1);
      };
      size_t piv = r;
      while (piv < rows.size() && !has(rows[piv])) piv++;
      if (piv == rows.size()) continue;
      std::swap(rows[r], rows[piv]);
      for (size_t j = 0; j < rows.size(); j++) {
        if (j != r && has(rows[j])) rows[j] = multiply(rows[j], rows[r]);
      }
      r++;
    }
    return rows;
  }
};

}  // namespace tripleforge
