#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dqfe/cd_circuit.hpp"

namespace dqfe {

/// Default upper bound on simulated qubits (2^24 amplitudes = 256 MiB).
inline constexpr std::size_t kDefaultMaxQubits = 24;

using Amplitude = std::complex<double>;
using QubitPair = std::pair<std::size_t, std::size_t>;

/// Dense 2^n statevector. Qubit 0 is the least significant index bit.
class Statevector {
 public:
  Statevector() = default;
  Statevector(std::size_t qubits, std::vector<Amplitude> amplitudes);

  std::size_t qubits() const { return qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  std::vector<Amplitude>& amplitudes() { return amps_; }
  const Amplitude& operator[](std::size_t k) const { return amps_[k]; }

  double norm_squared() const;

 private:
  std::size_t qubits_ = 0;
  std::vector<Amplitude> amps_;
};

/// |->^n: amplitude (-1)^popcount(k) / 2^(n/2).
Statevector init_minus_state(std::size_t qubits, std::size_t max_qubits = kDefaultMaxQubits);
/// |+>^n: amplitude 1 / 2^(n/2).
Statevector init_plus_state(std::size_t qubits, std::size_t max_qubits = kDefaultMaxQubits);

/// Applies the gate unitary in place.
void apply_gate(Statevector& state, const Gate& gate);

/// Prepares the circuit's initial state and applies its gates in order.
Statevector run(const QuantumCircuit& circuit, std::size_t max_qubits = kDefaultMaxQubits);

struct ZExpectations {
  std::vector<double> one_body;
  std::vector<double> two_body;
};

/// <Z_i> for every qubit and <Z_i Z_j> for every requested pair, summed over
/// basis states in ascending index order.
ZExpectations exact_z_expectations(const Statevector& state, std::span<const QubitPair> pairs);

/// Measurement record. Bitstring keys are written most significant qubit
/// first, so the rightmost character is qubit 0.
struct ShotCounts {
  std::size_t qubits = 0;
  std::uint64_t shots = 0;
  std::map<std::string, std::uint64_t> counts;
  bool operator==(const ShotCounts&) const = default;
};

std::string index_to_bitstring(std::uint64_t index, std::size_t qubits);
std::uint64_t bitstring_to_index(const std::string& bits);

/// Inverse-CDF sampling of z-basis outcomes with the project RNG.
ShotCounts sample_shots(const Statevector& state, std::uint64_t shots, std::uint64_t seed);

/// Empirical means of s_i and s_i s_j over the recorded shots.
ZExpectations estimate_z_expectations(const ShotCounts& counts, std::span<const QubitPair> pairs);

std::string counts_to_json(const ShotCounts& counts);
ShotCounts counts_from_json(const std::string& text);

}  // namespace dqfe
