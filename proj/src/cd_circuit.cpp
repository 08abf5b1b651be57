#include "dqfe/cd_circuit.hpp"

#include <cmath>
#include <numbers>

#include "dqfe/error.hpp"

namespace dqfe {

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RY: return "ry";
    case GateKind::RX: return "rx";
    case GateKind::RZZ: return "rzz";
    case GateKind::RYZ: return "ryz";
    case GateKind::H: return "h";
  }
  return "?";
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::RZZ || kind == GateKind::RYZ; }

void validate_circuit(const QuantumCircuit& circuit) {
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    const Gate& g = circuit.gates[k];
    const bool bad_index = g.q0 >= circuit.qubits ||
                           (is_two_qubit(g.kind) && (g.q1 >= circuit.qubits || g.q1 == g.q0));
    if (bad_index)
      throw ValidationError("gate " + std::to_string(k) + " (" + to_string(g.kind) +
                            ") has an invalid qubit index for a " +
                            std::to_string(circuit.qubits) + "-qubit circuit");
    if (!std::isfinite(g.angle))
      throw ValidationError("gate " + std::to_string(k) + " has a non-finite angle");
  }
}

void validate_impulse(const ImpulseParams& params) {
  if (!std::isfinite(params.theta)) throw ValidationError("impulse theta must be finite");
  if (!(params.lambda_eval > 0.0 && params.lambda_eval < 1.0))
    throw ValidationError("lambda_eval must lie strictly between 0 and 1");
}

QuantumCircuit build_cd_circuit(const IsingHamiltonian& h, const ImpulseParams& params,
                                TransverseSign sign) {
  validate_impulse(params);
  QuantumCircuit c;
  c.qubits = h.qubits();
  c.initial = sign == TransverseSign::plus ? InitialState::minus : InitialState::plus;
  c.impulse = params.theta;
  c.gates.reserve(h.qubits() + 2 * h.couplings.size());
  // exp(-i t P) is R_P(2 t).
  for (std::size_t q = 0; q < h.qubits(); ++q)
    c.gates.push_back({GateKind::RY, q, 0, 2.0 * params.theta * h.fields[q]});
  for (const Coupling& m : h.couplings) {
    const double angle = 2.0 * params.theta * m.weight;
    c.gates.push_back({GateKind::RYZ, m.i, m.j, angle});
    c.gates.push_back({GateKind::RYZ, m.j, m.i, angle});
  }
  validate_circuit(c);
  return c;
}

std::vector<Gate> decompose_two_body(const Gate& gate) {
  if (gate.kind != GateKind::RYZ)
    throw ValidationError("decompose_two_body expects an RYZ gate, got " + to_string(gate.kind));
  constexpr double half_pi = std::numbers::pi / 2.0;
  // RX(-pi/2) maps Z to Y under conjugation.
  return {
      {GateKind::RX, gate.q0, 0, half_pi},
      {GateKind::RZZ, gate.q0, gate.q1, gate.angle},
      {GateKind::RX, gate.q0, 0, -half_pi},
  };
}

}  // namespace dqfe
