#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dqfe/cd_circuit.hpp"
#include "dqfe/dataset.hpp"
#include "dqfe/mi_graph.hpp"
#include "dqfe/simulator.hpp"

namespace dqfe {

enum class PairScope { edges, all_pairs };
enum class ExtractionMode { exact, sampled };
enum class FeatureSetKind { classical, quantum, hybrid };

PairScope parse_pair_scope(const std::string& name);
ExtractionMode parse_extraction_mode(const std::string& name);
FeatureSetKind parse_feature_set_kind(const std::string& name);
std::string to_string(PairScope scope);
std::string to_string(ExtractionMode mode);
std::string to_string(FeatureSetKind kind);

struct ExtractionOptions {
  ImpulseParams impulse;
  std::uint64_t shots = 4096;
  ExtractionMode mode = ExtractionMode::exact;
  PairScope scope = PairScope::edges;
  std::uint64_t seed = 0;
  TransverseSign sign = TransverseSign::plus;
  std::size_t max_qubits = kDefaultMaxQubits;
};

struct QuantumFeatureVector {
  std::vector<double> one_body;
  std::vector<double> two_body;
  std::int64_t sample_id = -1;
};

/// Qubit pairs whose <Z_i Z_j> become features: the graph's edges, or every
/// i < j in lexicographic order.
std::vector<QubitPair> feature_pairs(const InteractionGraph& graph, PairScope scope);

/// "z_<i>" per qubit followed by "zz_<i>_<j>" per pair.
std::vector<std::string> quantum_column_names(std::size_t qubits, const std::vector<QubitPair>& pairs);

/// Encoder + circuit for one scaled feature row.
QuantumCircuit sample_circuit(std::span<const double> x, const InteractionGraph& graph,
                              const ExtractionOptions& options, std::int64_t sample_id);

/// Shot seed used for sample `index` in sampled mode.
std::uint64_t sample_seed(std::uint64_t seed, std::size_t index);

/// Runs the full per-sample chain: encode, build, simulate, measure.
QuantumFeatureVector sample_features(std::span<const double> x, const InteractionGraph& graph,
                                     const ExtractionOptions& options, std::size_t index,
                                     ShotCounts* counts_out = nullptr);

/// One quantum feature row per input row (train and test), labels and split
/// tags carried over. Rows are processed in parallel; output order and values
/// do not depend on the schedule. When `counts_out` is non-null in sampled
/// mode it receives every sample's shot record.
FeatureTable extract_quantum_features(const FeatureTable& table, const InteractionGraph& graph,
                                      const ExtractionOptions& options,
                                      std::vector<ShotCounts>* counts_out = nullptr);

/// Replays externally measured shot records (one per row, in row order)
/// without simulation.
FeatureTable features_from_counts(const FeatureTable& table, const InteractionGraph& graph,
                                  const std::vector<ShotCounts>& counts, PairScope scope);

/// Column-wise concatenation, classical first, names prefixed c_ / q_.
FeatureTable make_hybrid(const FeatureTable& classical, const FeatureTable& quantum);

}  // namespace dqfe
