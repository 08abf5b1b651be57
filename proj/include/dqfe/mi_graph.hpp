#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dqfe/dataset.hpp"

namespace dqfe {

/// Symmetric n×n matrix of pairwise mutual information in bits. The
/// diagonal holds each column's binned entropy.
struct MiMatrix {
  std::size_t n = 0;
  int bins = 8;
  std::vector<double> values;  // row-major n×n

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
  bool operator==(const MiMatrix&) const = default;
};

enum class Topology { chain, all_pairs, custom_edge_list };

Topology parse_topology(const std::string& name);
std::string to_string(Topology topology);

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
  bool operator==(const Edge&) const = default;
};

/// permutation[p] is the feature column placed on qubit p. Edges are in
/// qubit indices.
struct InteractionGraph {
  std::vector<std::size_t> permutation;
  std::vector<Edge> edges;
  Topology topology = Topology::chain;
  int bins = 8;

  std::size_t qubits() const { return permutation.size(); }
  bool operator==(const InteractionGraph&) const = default;
};

/// Equal-frequency bin index for every value. Bin edges sit at the
/// floor(k N / bins)-th order statistics; values equal to an edge fall in the
/// lower bin and duplicate edges merge bins.
std::vector<int> quantile_bins(std::span<const double> values, int bins);

/// Plug-in Shannon entropy (bits) of the equal-frequency binning.
double binned_entropy(std::span<const double> values, int bins);

/// Plug-in mutual information (bits) of the equal-frequency binnings of two
/// columns. Exactly symmetric in its arguments.
double estimate_mi(std::span<const double> a, std::span<const double> b, int bins);

/// MI over train rows of every column pair, each unordered pair computed once.
MiMatrix mi_matrix(const FeatureTable& table, int bins);

/// Sum of MI weights over consecutive positions of the ordering.
double chain_weight(const MiMatrix& mi, std::span<const std::size_t> order);

/// Maximum-weight Hamiltonian path heuristic: greedy nearest-neighbour
/// construction from `restarts` start columns, each polished by 2-opt.
InteractionGraph optimize_chain(const MiMatrix& mi, int restarts, std::uint64_t seed);

/// Weight change of reversing the segment [first, last] of a path ordering
/// (a 2-opt move). The ordering itself is not modified.
double two_opt_gain(const MiMatrix& mi, std::span<const std::size_t> order, std::size_t first,
                    std::size_t last);

InteractionGraph build_graph(const MiMatrix& mi, Topology topology,
                             std::vector<std::size_t> permutation,
                             std::span<const std::pair<std::size_t, std::size_t>> custom_edges = {});

void validate_permutation(std::span<const std::size_t> permutation, std::size_t n);
void validate_graph(const InteractionGraph& graph);

std::string mi_to_json(const MiMatrix& mi);
MiMatrix mi_from_json(const std::string& text);
std::string graph_to_json(const InteractionGraph& graph);
InteractionGraph graph_from_json(const std::string& text);

}  // namespace dqfe
