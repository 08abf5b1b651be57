// Dense reference model for small circuits. Every gate becomes a full
// 2^n x 2^n matrix built from Kronecker products of Pauli matrices, with
// exp(-i a P / 2) = cos(a/2) I - i sin(a/2) P for Pauli strings P.
// Nothing here shares code with the stride kernels in the simulator.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <vector>

#include "dqfe/cd_circuit.hpp"
#include "dqfe/simulator.hpp"

namespace dense_oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using cd = std::complex<double>;

inline Matrix pauli(char p) {
  Matrix m(2, 2);
  const cd i(0.0, 1.0);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    case 'H': m << 1, 1, 1, -1; m /= std::sqrt(2.0); break;
    default: m = Matrix::Identity(2, 2);
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// ops[q] acts on qubit q; qubit 0 is the rightmost (least significant) factor.
inline Matrix pauli_string(const std::map<std::size_t, char>& ops, std::size_t n) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t k = n; k-- > 0;) {
    auto it = ops.find(k);
    out = kron(out, pauli(it == ops.end() ? 'I' : it->second));
  }
  return out;
}

inline Matrix rotation(const std::map<std::size_t, char>& ops, std::size_t n, double angle) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  return std::cos(angle / 2.0) * Matrix::Identity(dim, dim) -
         cd(0.0, std::sin(angle / 2.0)) * pauli_string(ops, n);
}

inline Matrix gate_matrix(const dqfe::Gate& g, std::size_t n) {
  switch (g.kind) {
    case dqfe::GateKind::RY: return rotation({{g.q0, 'Y'}}, n, g.angle);
    case dqfe::GateKind::RX: return rotation({{g.q0, 'X'}}, n, g.angle);
    case dqfe::GateKind::RZZ: return rotation({{g.q0, 'Z'}, {g.q1, 'Z'}}, n, g.angle);
    case dqfe::GateKind::RYZ: return rotation({{g.q0, 'Y'}, {g.q1, 'Z'}}, n, g.angle);
    case dqfe::GateKind::H: return pauli_string({{g.q0, 'H'}}, n);
  }
  return {};
}

inline Vector initial_state(dqfe::InitialState init, std::size_t n) {
  Vector one(2);
  const double s = 1.0 / std::sqrt(2.0);
  if (init == dqfe::InitialState::minus)
    one << s, -s;
  else
    one << s, s;
  Matrix v = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) v = kron(v, one);
  return v.col(0);
}

inline Matrix circuit_unitary(const dqfe::QuantumCircuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& g : c.gates) u = gate_matrix(g, c.qubits) * u;
  return u;
}

inline Vector run(const dqfe::QuantumCircuit& c) {
  return circuit_unitary(c) * initial_state(c.initial, c.qubits);
}

inline double max_deviation(const Vector& expected, const dqfe::Statevector& actual) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < expected.size(); ++k)
    worst = std::max(worst, std::abs(expected(k) - actual[static_cast<std::size_t>(k)]));
  return worst;
}

// <psi| Z-string |psi> from the dense operator.
inline double z_expectation(const Vector& psi, const std::map<std::size_t, char>& ops, std::size_t n) {
  return (psi.adjoint() * pauli_string(ops, n) * psi)(0, 0).real();
}

}  // namespace dense_oracle
