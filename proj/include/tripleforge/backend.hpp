#pragma once

#include <memory>
#include <string>

#include "tripleforge/clifford1q.hpp"
#include "tripleforge/dense.hpp"
#include "tripleforge/graph_state.hpp"
#include "tripleforge/pauli.hpp"
#include "tripleforge/resource.hpp"

namespace tripleforge {

// A register holding the resource state, supporting the operations the
// protocol needs: single-qubit Pauli-basis measurements, Pauli frame
// corrections, and (for the audit layer) joint Pauli measurements.
class MeasurementBackend {
 public:
  virtual ~MeasurementBackend() = default;
  virtual int qubits() const = 0;
  virtual std::string id() const = 0;
  virtual MeasureResult measure_pauli(const PauliOperator& obs, CoinSource& coin) = 0;
  virtual void apply_pauli(const PauliOperator& p) = 0;
  virtual std::unique_ptr<MeasurementBackend> clone() const = 0;

  MeasureResult measure(int vertex, SignedAxis basis, CoinSource& coin) {
    PauliOperator obs = axis_observable(qubits(), vertex, basis);
    return measure_pauli(obs, coin);
  }

  void apply_z(int vertex, int exponent) {
    if (exponent & 1) apply_pauli(PauliOperator::single_z(qubits(), vertex));
  }

  static PauliOperator axis_observable(int n, int vertex, SignedAxis basis) {
    PauliOperator obs;
    switch (basis.axis) {
      case Axis::X: obs = PauliOperator::single_x(n, vertex); break;
      case Axis::Y: obs = PauliOperator::single_y(n, vertex); break;
      case Axis::Z: obs = PauliOperator::single_z(n, vertex); break;
    }
    return basis.neg ? obs.negated() : obs;
  }
};

class TableauBackend : public MeasurementBackend {
 public:
  StabilizerState state;

  explicit TableauBackend(const GraphBasisState& g) : state(g.to_stabilizer()) {}
  explicit TableauBackend(StabilizerState s) : state(std::move(s)) {}

  int qubits() const override { return state.n; }
  std::string id() const override { return "tableau"; }

  MeasureResult measure_pauli(const PauliOperator& obs, CoinSource& coin) override {
    return state.measure(obs, coin);
  }

  void apply_pauli(const PauliOperator& p) override {
    // conjugate every generator: g -> P g P^dag flips sign iff they anticommute
    for (auto& g : state.generators) {
      if (!commutes(g, p)) g = g.negated();
    }
  }

  std::unique_ptr<MeasurementBackend> clone() const override {
    return std::make_unique<TableauBackend>(state);
  }
};

class DenseBackend : public MeasurementBackend {
 public:
  DenseState state;
  double eps;

  explicit DenseBackend(const GraphBasisState& g, double eps_ = 1e-9)
      : state(g.to_dense()), eps(eps_) {}
  explicit DenseBackend(DenseState s, double eps_ = 1e-9) : state(std::move(s)), eps(eps_) {}

  int qubits() const override { return state.n; }
  std::string id() const override { return "dense"; }

  MeasureResult measure_pauli(const PauliOperator& obs, CoinSource& coin) override {
    // classify the branch probability as 0, 1/2 or 1 before touching the coin
    double e = state.expectation(obs);
    if (e > 1.0 - eps) {
      state = state.measure_pauli(obs, 0).second;
      return {0, true};
    }
    if (e < -1.0 + eps) {
      state = state.measure_pauli(obs, 1).second;
      return {1, true};
    }
    if (std::abs(e) > eps) {
      throw std::logic_error("dense backend saw a non-dyadic branch probability");
    }
    int m = coin.bit();
    state = state.measure_pauli(obs, m).second;
    return {m, false};
  }

  void apply_pauli(const PauliOperator& p) override { state.apply_pauli(p); }

  std::unique_ptr<MeasurementBackend> clone() const override {
    return std::make_unique<DenseBackend>(state, eps);
  }
};

inline std::unique_ptr<MeasurementBackend> make_backend(const std::string& id,
                                                        const GraphBasisState& g) {
  if (id == "tableau") return std::make_unique<TableauBackend>(g);
  if (id == "dense") return std::make_unique<DenseBackend>(g);
  throw std::invalid_argument("unknown backend: " + id);
}

}  // namespace tripleforge
