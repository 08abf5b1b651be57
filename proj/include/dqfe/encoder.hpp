#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dqfe/mi_graph.hpp"

namespace dqfe {

// Project-wide conventions:
//   * qubit 0 is the least significant bit of a statevector index;
//   * bit 0 is the sigma_z eigenvalue +1, bit 1 is -1.

struct Coupling {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
  bool operator==(const Coupling&) const = default;
};

/// Diagonal spin-glass Hamiltonian  sum_i h_i Z_i + sum_(i,j) m_ij Z_i Z_j.
struct IsingHamiltonian {
  std::vector<double> fields;
  std::vector<Coupling> couplings;

  std::size_t qubits() const { return fields.size(); }
  bool operator==(const IsingHamiltonian&) const = default;
};

/// Sign of the transverse-field starting Hamiltonian +-sum_i X_i. With `plus`
/// the ground state is |->^n; with `minus` it is |+>^n.
enum class TransverseSign { plus, minus };

TransverseSign parse_transverse_sign(const std::string& name);
std::string to_string(TransverseSign sign);

/// Places feature column permutation[p] on qubit p as its longitudinal field
/// and copies the graph's edges as couplings.
IsingHamiltonian encode_hamiltonian(std::span<const double> x, const InteractionGraph& graph);

/// sigma_z eigenvalue (+1 / -1) of qubit q in basis state `index`.
inline int spin(std::uint64_t index, std::size_t q) { return ((index >> q) & 1U) ? -1 : 1; }

/// Energy of a computational basis state; bits[q] is the bit of qubit q.
double hamiltonian_energy(const IsingHamiltonian& h, std::span<const std::uint8_t> bits);

/// Same, for the basis state with statevector index `index`.
double hamiltonian_energy(const IsingHamiltonian& h, std::uint64_t index);

}  // namespace dqfe
