#include "dqfe/encoder.hpp"

#include <cmath>

#include "dqfe/error.hpp"

namespace dqfe {

TransverseSign parse_transverse_sign(const std::string& name) {
  if (name == "plus" || name == "+") return TransverseSign::plus;
  if (name == "minus" || name == "-") return TransverseSign::minus;
  throw ValidationError("unknown transverse-field sign '" + name + "'");
}

std::string to_string(TransverseSign sign) { return sign == TransverseSign::plus ? "plus" : "minus"; }

IsingHamiltonian encode_hamiltonian(std::span<const double> x, const InteractionGraph& graph) {
  const std::size_t n = graph.qubits();
  if (x.size() != n)
    throw ValidationError("encode_hamiltonian: feature vector has " + std::to_string(x.size()) +
                          " entries, graph has " + std::to_string(n) + " qubits");
  IsingHamiltonian h;
  h.fields.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double v = x[graph.permutation[p]];
    if (!std::isfinite(v)) throw ValidationError("encode_hamiltonian: non-finite feature");
    h.fields[p] = v;
  }
  h.couplings.reserve(graph.edges.size());
  for (const Edge& e : graph.edges) h.couplings.push_back({e.i, e.j, e.weight});
  return h;
}

double hamiltonian_energy(const IsingHamiltonian& h, std::span<const std::uint8_t> bits) {
  if (bits.size() != h.qubits())
    throw ValidationError("hamiltonian_energy: bitstring has " + std::to_string(bits.size()) +
                          " bits, Hamiltonian has " + std::to_string(h.qubits()) + " qubits");
  auto s = [&](std::size_t q) { return bits[q] ? -1.0 : 1.0; };
  double e = 0.0;
  for (std::size_t q = 0; q < h.qubits(); ++q) e += h.fields[q] * s(q);
  for (const Coupling& c : h.couplings) e += c.weight * s(c.i) * s(c.j);
  return e;
}

double hamiltonian_energy(const IsingHamiltonian& h, std::uint64_t index) {
  double e = 0.0;
  for (std::size_t q = 0; q < h.qubits(); ++q) e += h.fields[q] * spin(index, q);
  for (const Coupling& c : h.couplings) e += c.weight * spin(index, c.i) * spin(index, c.j);
  return e;
}

}  // namespace dqfe
