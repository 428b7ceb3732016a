#pragma once

#include <cstdint>
#include <stdexcept>

#include "tripleforge/dense.hpp"

namespace tripleforge {

enum class Axis : uint8_t { X = 0, Y = 1, Z = 2 };

struct SignedAxis {
  Axis axis = Axis::Z;
  bool neg = false;
  bool operator==(const SignedAxis&) const = default;
};

inline SignedAxis operator-(SignedAxis a) { return {a.axis, !a.neg}; }

// Single-qubit Clifford, tracked by its conjugation action P -> C P C^dag
// on the Pauli axes.  Global phase is not represented; matrix() returns an
// arbitrary unitary realization, which is all the up-to-global-phase dense
// comparisons need.
struct Clifford1Q {
  SignedAxis img_x{Axis::X, false};
  SignedAxis img_z{Axis::Z, false};

  bool operator==(const Clifford1Q&) const = default;
  bool is_identity() const { return *this == Clifford1Q{}; }

  // Y = i X Z, so img(Y) = i img(X) img(Z) as single-qubit Paulis.
  SignedAxis img_y() const {
    // product table for i * A * B over axes, A != B
    if (img_x.axis == img_z.axis) throw std::logic_error("degenerate clifford");
    // i*X*Z = Y, i*Z*X = -Y, i*Y*X = Z, i*X*Y = -Z, i*Z*Y = X, i*Y*Z = -X
    static const int table[3][3] = {// [a][b] -> axis of i*A*B, sign in sign table
                                    {-1, 2, 1}, {2, -1, 0}, {1, 0, -1}};
    static const bool negtab[3][3] = {{false, true, false}, {false, false, true},
                                      {true, false, false}};
    int a = (int)img_x.axis, b = (int)img_z.axis;
    SignedAxis out{(Axis)table[a][b], negtab[a][b]};
    if (img_x.neg != img_z.neg) out.neg = !out.neg;
    return out;
  }

  SignedAxis img(SignedAxis p) const {
    SignedAxis out;
    switch (p.axis) {
      case Axis::X: out = img_x; break;
      case Axis::Y: out = img_y(); break;
      case Axis::Z: out = img_z; break;
    }
    if (p.neg) out.neg = !out.neg;
    return out;
  }

  Clifford1Q inverse() const {
    Clifford1Q inv;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      SignedAxis im = img({a, false});
      if (im.axis == Axis::X) inv.img_x = {a, im.neg};
      if (im.axis == Axis::Z) inv.img_z = {a, im.neg};
    }
    return inv;
  }
};

// then_apply(c1, c2): the Clifford "first c1, then c2" (c2*c1 as matrices).
inline Clifford1Q then_apply(const Clifford1Q& first, const Clifford1Q& second) {
  Clifford1Q out;
  out.img_x = second.img(first.img_x);
  out.img_z = second.img(first.img_z);
  return out;
}

// (-iZ)^{1/2}: X->Y, Z->Z.  (The paper's U; also the byproduct attached to
// neighbors by a Y-basis vertex measurement.)
inline Clifford1Q sqrt_minus_iz() { return {{Axis::Y, false}, {Axis::Z, false}}; }
// (iZ)^{1/2}: X->-Y, Z->Z.
inline Clifford1Q sqrt_plus_iz() { return {{Axis::Y, true}, {Axis::Z, false}}; }
// (iX)^{1/2}: Z->Y, X->X.  (The paper's W.)
inline Clifford1Q sqrt_plus_ix() { return {{Axis::X, false}, {Axis::Y, false}}; }
// (-iX)^{1/2}: Z->-Y, X->X.
inline Clifford1Q sqrt_minus_ix() { return {{Axis::X, false}, {Axis::Y, true}}; }
// (-iY)^{1/2} = (I-iY)/sqrt(2): X->-Z, Z->X.
inline Clifford1Q sqrt_minus_iy() { return {{Axis::Z, true}, {Axis::X, false}}; }

inline Mat2 matmul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; i++) {
    for (int j = 0; j < 2; j++) {
      c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    }
  }
  return c;
}

// Some unitary realizing the tableau (global phase arbitrary), found by
// searching words in {H, S}.
inline Mat2 clifford_matrix(const Clifford1Q& c) {
  const double s = 1.0 / std::sqrt(2.0);
  const Mat2 H{{{cd(s), cd(s)}, {cd(s), cd(-s)}}};
  const Mat2 S{{{cd(1), cd(0)}, {cd(0), cd(0, 1)}}};
  const Clifford1Q tH{{Axis::Z, false}, {Axis::X, false}};
  const Clifford1Q tS{{Axis::Y, false}, {Axis::Z, false}};
  Clifford1Q cur;
  Mat2 m{{{cd(1), cd(0)}, {cd(0), cd(1)}}};
  // BFS over words would be tidier; a bounded DFS with restarts is enough
  // for 24 elements.
  std::vector<Clifford1Q> tabs{cur};
  std::vector<Mat2> mats{m};
  for (size_t i = 0; i < tabs.size(); i++) {
    if (tabs[i] == c) return mats[i];
    for (int g = 0; g < 2; g++) {
      Clifford1Q nxt = then_apply(tabs[i], g == 0 ? tH : tS);
      bool seen = false;
      for (const auto& t : tabs) {
        if (t == nxt) {
          seen = true;
          break;
        }
      }
      if (!seen) {
        tabs.push_back(nxt);
        mats.push_back(matmul(g == 0 ? H : S, mats[i]));
      }
    }
  }
  throw std::logic_error("clifford tableau not reachable");
}

}  // namespace tripleforge
