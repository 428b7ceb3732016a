#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "tripleforge/pauli.hpp"

namespace tripleforge {

using cd = std::complex<double>;
using Mat2 = std::array<std::array<cd, 2>, 2>;

// Brute-force state vector on up to ~14 qubits.  Ground-truth oracle for
// everything the stabilizer machinery claims; never on the production path.
class DenseState {
 public:
  int n = 0;
  std::vector<cd> amps;

  DenseState() = default;
  explicit DenseState(int n_) : n(n_), amps(size_t(1) << n_, 0.0) {
    if (n_ < 0 || n_ > 20) throw std::invalid_argument("dense size limit exceeded");
  }

  static DenseState all_plus(int n) {
    DenseState s(n);
    double a = 1.0 / std::sqrt(double(size_t(1) << n));
    for (auto& v : s.amps) v = a;
    return s;
  }

  static DenseState computational(int n, uint64_t basis) {
    DenseState s(n);
    s.amps[basis] = 1.0;
    return s;
  }

  void apply_cz(int a, int b) {
    uint64_t ma = 1ull << a, mb = 1ull << b;
    for (uint64_t i = 0; i < amps.size(); i++) {
      if ((i & ma) && (i & mb)) amps[i] = -amps[i];
    }
  }

  void apply_1q(int q, const Mat2& u) {
    uint64_t m = 1ull << q;
    for (uint64_t i = 0; i < amps.size(); i++) {
      if (i & m) continue;
      cd a0 = amps[i], a1 = amps[i | m];
      amps[i] = u[0][0] * a0 + u[0][1] * a1;
      amps[i | m] = u[1][0] * a0 + u[1][1] * a1;
    }
  }

  void apply_pauli(const PauliOperator& p) {
    if (p.n != n) throw std::invalid_argument("dimension mismatch");
    static const cd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<cd> out(amps.size());
    for (uint64_t i = 0; i < amps.size(); i++) {
      // X^x Z^z |i> = (-1)^{z.i} |i ^ x>
      cd c = ipow[p.phase];
      if (parity(p.z_bits & i)) c = -c;
      out[i ^ p.x_bits] = c * amps[i];
    }
    amps = std::move(out);
  }

  cd inner(const DenseState& o) const {
    cd acc = 0.0;
    for (uint64_t i = 0; i < amps.size(); i++) acc += std::conj(amps[i]) * o.amps[i];
    return acc;
  }

  double norm() const { return std::sqrt(std::abs(inner(*this).real())); }

  double expectation(const PauliOperator& p) const {
    DenseState t = *this;
    t.apply_pauli(p);
    return inner(t).real();
  }

  // Probability of eigenvalue (-1)^branch of a Hermitian Pauli, plus the
  // renormalized projected state.
  std::pair<double, DenseState> measure_pauli(const PauliOperator& obs, int branch) const {
    if (!obs.hermitian()) throw std::invalid_argument("observable not Hermitian");
    DenseState po = *this;
    po.apply_pauli(obs);
    double sgn = branch ? -1.0 : 1.0;
    DenseState proj(n);
    for (uint64_t i = 0; i < amps.size(); i++) {
      proj.amps[i] = 0.5 * (amps[i] + sgn * po.amps[i]);
    }
    double prob = std::abs(proj.inner(proj).real());
    if (prob < 1e-12) {
      throw std::domain_error("projection onto zero-probability branch");
    }
    double inv = 1.0 / std::sqrt(prob);
    for (auto& v : proj.amps) v *= inv;
    return {prob, proj};
  }
};

inline bool equal_up_to_global_phase(const DenseState& a, const DenseState& b,
                                     double tol = 1e-8) {
  if (a.n != b.n) throw std::invalid_argument("dimension mismatch");
  return std::abs(std::abs(a.inner(b)) - 1.0) < tol;
}

}  // namespace tripleforge
