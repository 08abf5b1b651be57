#include "dqfe/features.hpp"

#include "dqfe/encoder.hpp"
#include "dqfe/error.hpp"
#include "dqfe/parallel.hpp"
#include "dqfe/rng.hpp"

namespace dqfe {

namespace {

FeatureTable assemble(const FeatureTable& table, std::vector<std::string> names,
                      const std::vector<QuantumFeatureVector>& rows) {
  std::vector<double> values;
  values.reserve(rows.size() * names.size());
  for (const auto& r : rows) {
    values.insert(values.end(), r.one_body.begin(), r.one_body.end());
    values.insert(values.end(), r.two_body.begin(), r.two_body.end());
  }
  return FeatureTable(std::move(names), std::move(values), table.labels(), table.splits());
}

void check_width(const FeatureTable& table, const InteractionGraph& graph, std::size_t max_qubits) {
  if (graph.qubits() != table.cols())
    throw ValidationError("graph has " + std::to_string(graph.qubits()) + " qubits but the table has " +
                          std::to_string(table.cols()) + " feature columns");
  if (graph.qubits() > max_qubits)
    throw CapacityError(std::to_string(graph.qubits()) + " qubits exceeds the desk-scale cap of " +
                        std::to_string(max_qubits) + " qubits");
}

}  // namespace

PairScope parse_pair_scope(const std::string& name) {
  if (name == "edges") return PairScope::edges;
  if (name == "all_pairs") return PairScope::all_pairs;
  throw ValidationError("unknown pair scope '" + name + "'");
}

ExtractionMode parse_extraction_mode(const std::string& name) {
  if (name == "exact") return ExtractionMode::exact;
  if (name == "sampled") return ExtractionMode::sampled;
  throw ValidationError("unknown extraction mode '" + name + "'");
}

FeatureSetKind parse_feature_set_kind(const std::string& name) {
  if (name == "classical") return FeatureSetKind::classical;
  if (name == "quantum") return FeatureSetKind::quantum;
  if (name == "hybrid") return FeatureSetKind::hybrid;
  throw ValidationError("unknown feature set '" + name + "'");
}

std::string to_string(PairScope scope) { return scope == PairScope::edges ? "edges" : "all_pairs"; }
std::string to_string(ExtractionMode mode) { return mode == ExtractionMode::exact ? "exact" : "sampled"; }

std::string to_string(FeatureSetKind kind) {
  switch (kind) {
    case FeatureSetKind::classical: return "classical";
    case FeatureSetKind::quantum: return "quantum";
    case FeatureSetKind::hybrid: return "hybrid";
  }
  return "classical";
}

std::vector<QubitPair> feature_pairs(const InteractionGraph& graph, PairScope scope) {
  std::vector<QubitPair> pairs;
  if (scope == PairScope::edges) {
    for (const Edge& e : graph.edges) pairs.emplace_back(e.i, e.j);
  } else {
    for (std::size_t i = 0; i < graph.qubits(); ++i)
      for (std::size_t j = i + 1; j < graph.qubits(); ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

std::vector<std::string> quantum_column_names(std::size_t qubits, const std::vector<QubitPair>& pairs) {
  std::vector<std::string> names;
  for (std::size_t q = 0; q < qubits; ++q) names.push_back("z_" + std::to_string(q));
  for (const auto& [i, j] : pairs) names.push_back("zz_" + std::to_string(i) + "_" + std::to_string(j));
  return names;
}

QuantumCircuit sample_circuit(std::span<const double> x, const InteractionGraph& graph,
                              const ExtractionOptions& options, std::int64_t sample_id) {
  QuantumCircuit c = build_cd_circuit(encode_hamiltonian(x, graph), options.impulse, options.sign);
  c.sample_id = sample_id;
  return c;
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t index) { return derive_seed(seed, {0x5A, index}); }

QuantumFeatureVector sample_features(std::span<const double> x, const InteractionGraph& graph,
                                     const ExtractionOptions& options, std::size_t index,
                                     ShotCounts* counts_out) {
  const auto id = static_cast<std::int64_t>(index);
  const Statevector state = run(sample_circuit(x, graph, options, id), options.max_qubits);
  const auto pairs = feature_pairs(graph, options.scope);
  ZExpectations z;
  if (options.mode == ExtractionMode::exact) {
    z = exact_z_expectations(state, pairs);
  } else {
    ShotCounts counts = sample_shots(state, options.shots, sample_seed(options.seed, index));
    z = estimate_z_expectations(counts, pairs);
    if (counts_out != nullptr) *counts_out = std::move(counts);
  }
  return {std::move(z.one_body), std::move(z.two_body), id};
}

FeatureTable extract_quantum_features(const FeatureTable& table, const InteractionGraph& graph,
                                      const ExtractionOptions& options,
                                      std::vector<ShotCounts>* counts_out) {
  check_width(table, graph, options.max_qubits);
  validate_impulse(options.impulse);
  if (options.mode == ExtractionMode::sampled && options.shots == 0)
    throw ValidationError("sampled extraction needs shots >= 1");

  std::vector<QuantumFeatureVector> rows(table.rows());
  const bool keep_counts = counts_out != nullptr && options.mode == ExtractionMode::sampled;
  if (keep_counts) counts_out->assign(table.rows(), ShotCounts{});
  parallel_for(table.rows(), [&](std::size_t r) {
    rows[r] = sample_features(table.row(r), graph, options, r, keep_counts ? &(*counts_out)[r] : nullptr);
  });
  return assemble(table, quantum_column_names(graph.qubits(), feature_pairs(graph, options.scope)), rows);
}

FeatureTable features_from_counts(const FeatureTable& table, const InteractionGraph& graph,
                                  const std::vector<ShotCounts>& counts, PairScope scope) {
  if (graph.qubits() != table.cols())
    throw ValidationError("graph width does not match the table");
  if (counts.size() != table.rows())
    throw ValidationError("expected " + std::to_string(table.rows()) + " shot records, got " +
                          std::to_string(counts.size()));
  const auto pairs = feature_pairs(graph, scope);
  std::vector<QuantumFeatureVector> rows(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    if (counts[r].qubits != graph.qubits())
      throw ValidationError("shot record " + std::to_string(r) + " has " + std::to_string(counts[r].qubits) +
                            "-bit outcomes, expected " + std::to_string(graph.qubits()));
    ZExpectations z = estimate_z_expectations(counts[r], pairs);
    rows[r] = {std::move(z.one_body), std::move(z.two_body), static_cast<std::int64_t>(r)};
  }
  return assemble(table, quantum_column_names(graph.qubits(), pairs), rows);
}

FeatureTable make_hybrid(const FeatureTable& classical, const FeatureTable& quantum) {
  if (classical.rows() != quantum.rows())
    throw ValidationError("make_hybrid: row counts differ (" + std::to_string(classical.rows()) + " vs " +
                          std::to_string(quantum.rows()) + ")");
  for (std::size_t r = 0; r < classical.rows(); ++r) {
    if (classical.labels()[r] != quantum.labels()[r])
      throw ValidationError("make_hybrid: label mismatch at row " + std::to_string(r));
    if (classical.splits()[r] != quantum.splits()[r])
      throw ValidationError("make_hybrid: split mismatch at row " + std::to_string(r));
  }
  std::vector<std::string> names;
  for (const auto& n : classical.column_names()) names.push_back("c_" + n);
  for (const auto& n : quantum.column_names()) names.push_back("q_" + n);
  std::vector<double> values;
  values.reserve(classical.rows() * names.size());
  for (std::size_t r = 0; r < classical.rows(); ++r) {
    const auto a = classical.row(r);
    const auto b = quantum.row(r);
    values.insert(values.end(), a.begin(), a.end());
    values.insert(values.end(), b.begin(), b.end());
  }
  return FeatureTable(std::move(names), std::move(values), classical.labels(), classical.splits());
}

}  // namespace dqfe
