#include "dqfe/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include <json.hpp>

#include "dqfe/error.hpp"
#include "dqfe/rng.hpp"

namespace dqfe {

namespace {

void check_width(std::size_t qubits, std::size_t max_qubits) {
  if (qubits < 1) throw ValidationError("statevector needs at least one qubit");
  if (qubits > max_qubits)
    throw CapacityError(std::to_string(qubits) + " qubits exceeds the desk-scale cap of " +
                        std::to_string(max_qubits) + " qubits");
}

// Visits every index with bit `q` clear; the partner index is i | (1 << q).
template <typename F>
void for_each_pair(std::size_t dim, std::size_t q, F&& f) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < dim; base += 2 * stride)
    for (std::size_t i = base; i < base + stride; ++i) f(i, i + stride);
}

void check_pairs(std::size_t qubits, std::span<const QubitPair> pairs) {
  for (const auto& [i, j] : pairs)
    if (i >= qubits || j >= qubits || i == j)
      throw ValidationError("invalid qubit pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
}

}  // namespace

Statevector::Statevector(std::size_t qubits, std::vector<Amplitude> amplitudes)
    : qubits_(qubits), amps_(std::move(amplitudes)) {
  if (qubits_ >= 63 || amps_.size() != (std::size_t{1} << qubits_))
    throw ValidationError("statevector length must be 2^qubits");
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const Amplitude& a : amps_) s += std::norm(a);
  return s;
}

Statevector init_minus_state(std::size_t qubits, std::size_t max_qubits) {
  check_width(qubits, max_qubits);
  const std::size_t dim = std::size_t{1} << qubits;
  const double a = std::pow(2.0, -0.5 * static_cast<double>(qubits));
  std::vector<Amplitude> amps(dim);
  for (std::size_t k = 0; k < dim; ++k) amps[k] = (std::popcount(k) & 1U) ? -a : a;
  return Statevector(qubits, std::move(amps));
}

Statevector init_plus_state(std::size_t qubits, std::size_t max_qubits) {
  check_width(qubits, max_qubits);
  const std::size_t dim = std::size_t{1} << qubits;
  return Statevector(qubits, std::vector<Amplitude>(dim, std::pow(2.0, -0.5 * static_cast<double>(qubits))));
}

void apply_gate(Statevector& state, const Gate& gate) {
  const std::size_t n = state.qubits();
  if (gate.q0 >= n || (is_two_qubit(gate.kind) && (gate.q1 >= n || gate.q1 == gate.q0)))
    throw ValidationError("apply_gate: qubit index out of range for " + std::to_string(n) + " qubits");

  auto& a = state.amplitudes();
  const std::size_t dim = a.size();
  const double c = std::cos(gate.angle / 2.0);
  const double s = std::sin(gate.angle / 2.0);

  switch (gate.kind) {
    case GateKind::RY:
      for_each_pair(dim, gate.q0, [&](std::size_t i0, std::size_t i1) {
        const Amplitude x = a[i0];
        const Amplitude y = a[i1];
        a[i0] = c * x - s * y;
        a[i1] = s * x + c * y;
      });
      break;
    case GateKind::RX: {
      const Amplitude mis(0.0, -s);
      for_each_pair(dim, gate.q0, [&](std::size_t i0, std::size_t i1) {
        const Amplitude x = a[i0];
        const Amplitude y = a[i1];
        a[i0] = c * x + mis * y;
        a[i1] = mis * x + c * y;
      });
      break;
    }
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      for_each_pair(dim, gate.q0, [&](std::size_t i0, std::size_t i1) {
        const Amplitude x = a[i0];
        const Amplitude y = a[i1];
        a[i0] = r * (x + y);
        a[i1] = r * (x - y);
      });
      break;
    }
    case GateKind::RZZ: {
      const Amplitude even(c, -s);
      const Amplitude odd(c, s);
      for (std::size_t k = 0; k < dim; ++k)
        a[k] *= (((k >> gate.q0) ^ (k >> gate.q1)) & 1U) ? odd : even;
      break;
    }
    case GateKind::RYZ:
      // For fixed Z_q1 = s_j the gate is RY(s_j angle) on q0.
      for_each_pair(dim, gate.q0, [&](std::size_t i0, std::size_t i1) {
        const double sj = ((i0 >> gate.q1) & 1U) ? -s : s;
        const Amplitude x = a[i0];
        const Amplitude y = a[i1];
        a[i0] = c * x - sj * y;
        a[i1] = sj * x + c * y;
      });
      break;
  }
  assert(std::abs(1.0 - state.norm_squared()) < 1e-10);
}

Statevector run(const QuantumCircuit& circuit, std::size_t max_qubits) {
  validate_circuit(circuit);
  Statevector state = circuit.initial == InitialState::minus ? init_minus_state(circuit.qubits, max_qubits)
                                                             : init_plus_state(circuit.qubits, max_qubits);
  for (const Gate& g : circuit.gates) apply_gate(state, g);
  return state;
}

ZExpectations exact_z_expectations(const Statevector& state, std::span<const QubitPair> pairs) {
  const std::size_t n = state.qubits();
  check_pairs(n, pairs);
  // Each observable accumulates its +1 and -1 sectors separately so that a
  // state with equal weight on both sectors gives exactly zero.
  std::vector<double> one_pos(n, 0.0), one_neg(n, 0.0);
  std::vector<double> two_pos(pairs.size(), 0.0), two_neg(pairs.size(), 0.0);
  const auto& a = state.amplitudes();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double p = std::norm(a[k]);
    for (std::size_t q = 0; q < n; ++q) (((k >> q) & 1U) ? one_neg : one_pos)[q] += p;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      ((((k >> pairs[e].first) ^ (k >> pairs[e].second)) & 1U) ? two_neg : two_pos)[e] += p;
  }
  ZExpectations out{std::vector<double>(n), std::vector<double>(pairs.size())};
  for (std::size_t q = 0; q < n; ++q) out.one_body[q] = one_pos[q] - one_neg[q];
  for (std::size_t e = 0; e < pairs.size(); ++e) out.two_body[e] = two_pos[e] - two_neg[e];
  for (double& v : out.one_body) v = std::clamp(v, -1.0, 1.0);
  for (double& v : out.two_body) v = std::clamp(v, -1.0, 1.0);
  return out;
}

std::string index_to_bitstring(std::uint64_t index, std::size_t qubits) {
  std::string bits(qubits, '0');
  for (std::size_t q = 0; q < qubits; ++q)
    if ((index >> q) & 1U) bits[qubits - 1 - q] = '1';
  return bits;
}

std::uint64_t bitstring_to_index(const std::string& bits) {
  if (bits.empty() || bits.size() > 63) throw ValidationError("bitstring length must be 1..63");
  std::uint64_t index = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw ValidationError("bitstring '" + bits + "' has a non-binary character");
    index = (index << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return index;
}

ShotCounts sample_shots(const Statevector& state, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ValidationError("sample_shots: shots must be positive");
  const auto& a = state.amplitudes();
  std::vector<double> cdf(a.size());
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    total += std::norm(a[k]);
    cdf[k] = total;
  }
  std::size_t last_nonzero = a.size() - 1;
  while (last_nonzero > 0 && std::norm(a[last_nonzero]) == 0.0) --last_nonzero;
  std::vector<std::uint64_t> hits(a.size(), 0);
  Rng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    // First k with cdf[k] > u; that state necessarily has non-zero weight.
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++hits[it == cdf.end() ? last_nonzero : static_cast<std::size_t>(it - cdf.begin())];
  }
  ShotCounts out{state.qubits(), shots, {}};
  for (std::size_t k = 0; k < hits.size(); ++k)
    if (hits[k] > 0) out.counts.emplace(index_to_bitstring(k, state.qubits()), hits[k]);
  return out;
}

ZExpectations estimate_z_expectations(const ShotCounts& counts, std::span<const QubitPair> pairs) {
  const std::size_t n = counts.qubits;
  check_pairs(n, pairs);
  std::uint64_t total = 0;
  for (const auto& [bits, c] : counts.counts) total += c;
  if (total == 0) throw ValidationError("estimate_z_expectations: no shots recorded");

  std::vector<std::int64_t> one(n, 0);
  std::vector<std::int64_t> two(pairs.size(), 0);
  for (const auto& [bits, c] : counts.counts) {
    if (bits.size() != n) throw ValidationError("bitstring '" + bits + "' does not have " + std::to_string(n) + " bits");
    const std::uint64_t k = bitstring_to_index(bits);
    const auto w = static_cast<std::int64_t>(c);
    for (std::size_t q = 0; q < n; ++q) one[q] += ((k >> q) & 1U) ? -w : w;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      two[e] += (((k >> pairs[e].first) ^ (k >> pairs[e].second)) & 1U) ? -w : w;
  }
  const double t = static_cast<double>(total);
  ZExpectations out{std::vector<double>(n), std::vector<double>(pairs.size())};
  for (std::size_t q = 0; q < n; ++q) out.one_body[q] = static_cast<double>(one[q]) / t;
  for (std::size_t e = 0; e < pairs.size(); ++e) out.two_body[e] = static_cast<double>(two[e]) / t;
  return out;
}

std::string counts_to_json(const ShotCounts& counts) {
  nlohmann::json j;
  j["shots"] = counts.shots;
  j["counts"] = nlohmann::json::object();
  for (const auto& [bits, c] : counts.counts) j["counts"][bits] = c;
  return j.dump() + "\n";
}

ShotCounts counts_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ShotCounts out;
    std::uint64_t sum = 0;
    for (const auto& [bits, c] : j.at("counts").items()) {
      if (out.qubits == 0) out.qubits = bits.size();
      if (bits.size() != out.qubits) throw ValidationError("counts bitstrings have mixed lengths");
      bitstring_to_index(bits);
      const auto v = c.get<std::uint64_t>();
      out.counts[bits] += v;
      sum += v;
    }
    out.shots = j.value("shots", sum);
    if (out.shots != sum)
      throw ValidationError("counts sum to " + std::to_string(sum) + " but shots = " + std::to_string(out.shots));
    if (sum == 0) throw ValidationError("counts file records no shots");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed counts JSON: ") + e.what());
  }
}

}  // namespace dqfe
