#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dqfe/encoder.hpp"

namespace dqfe {

/// Rotation gates use the standard convention R_P(angle) = exp(-i angle P / 2).
///   RY(q0), RX(q0), H(q0)     single-qubit
///   RZZ(q0, q1)               exp(-i angle Z_q0 Z_q1 / 2)
///   RYZ(q0, q1)               exp(-i angle Y_q0 Z_q1 / 2)
enum class GateKind { RY, RX, RZZ, RYZ, H };

std::string to_string(GateKind kind);
bool is_two_qubit(GateKind kind);

struct Gate {
  GateKind kind = GateKind::RY;
  std::size_t q0 = 0;
  std::size_t q1 = 0;
  double angle = 0.0;
  bool operator==(const Gate&) const = default;
};

enum class InitialState { minus, plus };

struct QuantumCircuit {
  std::size_t qubits = 0;
  InitialState initial = InitialState::minus;
  std::vector<Gate> gates;
  std::int64_t sample_id = -1;
  double impulse = 0.0;
};

/// Checks gate indices and angles against the circuit width.
void validate_circuit(const QuantumCircuit& circuit);

struct ImpulseParams {
  /// Integrated impulse per unit Hamiltonian coefficient (radians).
  double theta = 0.5;
  /// Schedule point the gauge potential is evaluated at. With all
  /// coefficients folded into theta it only travels as provenance.
  double lambda_eval = 0.5;
};

void validate_impulse(const ImpulseParams& params);

/// Single impulse step of the first-order counterdiabatic gauge potential:
///   exp(-i theta h_q Y_q)                  for every qubit, ascending;
///   exp(-i theta m_ij Y_i Z_j), exp(-i theta m_ij Z_i Y_j)  per coupling.
/// The starting state follows the transverse-field sign.
QuantumCircuit build_cd_circuit(const IsingHamiltonian& h, const ImpulseParams& params,
                                TransverseSign sign = TransverseSign::plus);

/// RYZ(i, j, a) = RX(i, -pi/2) RZZ(i, j, a) RX(i, pi/2), returned in time
/// order. Throws for any other gate kind.
std::vector<Gate> decompose_two_body(const Gate& gate);

/// OpenQASM 3 program: stdgates include, an rzz definition, qubit and bit
/// registers, initial-state preparation, the gates (RYZ decomposed) and a
/// final z-basis measurement of every qubit.
std::string export_qasm(const QuantumCircuit& circuit);

/// Parses the OpenQASM 3 subset written by export_qasm. The returned
/// circuit holds the emitted gates (RYZ appears decomposed). Throws IoError
/// with a line number on anything outside the grammar.
QuantumCircuit parse_qasm(const std::string& text);

}  // namespace dqfe
