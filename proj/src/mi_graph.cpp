#include "dqfe/mi_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "dqfe/error.hpp"
#include "dqfe/parallel.hpp"
#include "dqfe/rng.hpp"

namespace dqfe {

namespace {

constexpr double kGainTolerance = 1e-12;

// Entropy of a histogram. Counts are summed in ascending order so the result
// depends only on the multiset of counts, not on bin labelling.
double entropy_of_counts(std::vector<std::size_t> counts, std::size_t total) {
  std::sort(counts.begin(), counts.end());
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

int realized_bins(const std::vector<int>& bins) {
  return bins.empty() ? 0 : *std::max_element(bins.begin(), bins.end()) + 1;
}

double entropy_of_bins(const std::vector<int>& bins) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(realized_bins(bins)), 0);
  for (int b : bins) ++counts[static_cast<std::size_t>(b)];
  return entropy_of_counts(std::move(counts), bins.size());
}

double mi_from_bins(const std::vector<int>& a, const std::vector<int>& b) {
  const double ha = entropy_of_bins(a);
  const double hb = entropy_of_bins(b);
  const std::size_t nb = static_cast<std::size_t>(realized_bins(b));
  std::vector<std::size_t> joint(static_cast<std::size_t>(realized_bins(a)) * nb, 0);
  for (std::size_t k = 0; k < a.size(); ++k)
    ++joint[static_cast<std::size_t>(a[k]) * nb + static_cast<std::size_t>(b[k])];
  const double hab = entropy_of_counts(std::move(joint), a.size());
  const double mi = (ha + hb) - hab;
  return std::clamp(mi, 0.0, std::min(ha, hb));
}

void check_columns(std::span<const double> a, std::span<const double> b, int bins) {
  if (bins < 1) throw ValidationError("mutual information needs bins >= 1");
  if (a.size() != b.size())
    throw ValidationError("mutual information: column lengths differ (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
}

std::vector<std::size_t> greedy_path(const MiMatrix& mi, std::size_t start) {
  const std::size_t n = mi.n;
  std::vector<std::size_t> path{start};
  std::vector<bool> used(n, false);
  used[start] = true;
  while (path.size() < n) {
    const std::size_t tail = path.back();
    std::size_t best = n;
    double best_w = -1.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      if (mi(tail, c) > best_w) {
        best_w = mi(tail, c);
        best = c;
      }
    }
    used[best] = true;
    path.push_back(best);
  }
  return path;
}

void two_opt(const MiMatrix& mi, std::vector<std::size_t>& path) {
  const std::size_t n = path.size();
  for (;;) {
    double best_gain = kGainTolerance;
    std::size_t best_first = 0;
    std::size_t best_last = 0;
    for (std::size_t first = 0; first + 1 < n; ++first) {
      for (std::size_t last = first + 1; last < n; ++last) {
        if (first == 0 && last == n - 1) continue;
        const double gain = two_opt_gain(mi, path, first, last);
        if (gain > best_gain) {
          best_gain = gain;
          best_first = first;
          best_last = last;
        }
      }
    }
    if (best_last == 0) return;
    std::reverse(path.begin() + static_cast<std::ptrdiff_t>(best_first),
                 path.begin() + static_cast<std::ptrdiff_t>(best_last) + 1);
  }
}

}  // namespace

Topology parse_topology(const std::string& name) {
  if (name == "chain") return Topology::chain;
  if (name == "all_pairs") return Topology::all_pairs;
  if (name == "custom_edge_list" || name == "custom") return Topology::custom_edge_list;
  throw ValidationError("unknown topology '" + name + "'");
}

std::string to_string(Topology topology) {
  switch (topology) {
    case Topology::chain: return "chain";
    case Topology::all_pairs: return "all_pairs";
    case Topology::custom_edge_list: return "custom_edge_list";
  }
  return "chain";
}

std::vector<int> quantile_bins(std::span<const double> values, int bins) {
  if (bins < 1) throw ValidationError("quantile_bins: bins must be positive");
  const std::size_t n = values.size();
  if (n < static_cast<std::size_t>(bins))
    throw ValidationError("quantile_bins: " + std::to_string(n) + " values is fewer than " +
                          std::to_string(bins) + " bins");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> edges;
  const std::size_t k_bins = static_cast<std::size_t>(bins);
  for (std::size_t k = 1; k < k_bins; ++k) edges.push_back(sorted[k * n / k_bins - 1]);
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<int>(std::lower_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
  // Compact to realized bins so empty upper bins never appear.
  std::vector<int> remap(edges.size() + 1, -1);
  for (int b : out) remap[static_cast<std::size_t>(b)] = 0;
  int next = 0;
  for (int& r : remap)
    if (r == 0) r = next++;
  for (int& b : out) b = remap[static_cast<std::size_t>(b)];
  return out;
}

double binned_entropy(std::span<const double> values, int bins) {
  return entropy_of_bins(quantile_bins(values, bins));
}

double estimate_mi(std::span<const double> a, std::span<const double> b, int bins) {
  check_columns(a, b, bins);
  return mi_from_bins(quantile_bins(a, bins), quantile_bins(b, bins));
}

MiMatrix mi_matrix(const FeatureTable& table, int bins) {
  const std::size_t n = table.cols();
  if (table.count(Split::train) < static_cast<std::size_t>(std::max(bins, 1)))
    throw ValidationError("mi_matrix: fewer train rows than bins");

  std::vector<std::vector<int>> binned(n);
  parallel_for(n, [&](std::size_t c) { binned[c] = quantile_bins(table.column(c, Split::train), bins); });

  MiMatrix mi{n, bins, std::vector<double>(n * n, 0.0)};
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<double> out(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    out[k] = i == j ? entropy_of_bins(binned[i]) : mi_from_bins(binned[i], binned[j]);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    mi(i, j) = out[k];
    mi(j, i) = out[k];
  }
  return mi;
}

double chain_weight(const MiMatrix& mi, std::span<const std::size_t> order) {
  double w = 0.0;
  for (std::size_t p = 0; p + 1 < order.size(); ++p) w += mi(order[p], order[p + 1]);
  return w;
}

double two_opt_gain(const MiMatrix& mi, std::span<const std::size_t> order, std::size_t first,
                    std::size_t last) {
  const std::size_t n = order.size();
  double gain = 0.0;
  if (first > 0) gain += mi(order[first - 1], order[last]) - mi(order[first - 1], order[first]);
  if (last + 1 < n) gain += mi(order[first], order[last + 1]) - mi(order[last], order[last + 1]);
  return gain;
}

InteractionGraph optimize_chain(const MiMatrix& mi, int restarts, std::uint64_t seed) {
  const std::size_t n = mi.n;
  if (n == 0) throw ValidationError("optimize_chain: empty MI matrix");
  if (restarts < 1) throw ValidationError("optimize_chain: restarts must be positive");

  // The first n restarts visit distinct start columns in a seeded order.
  std::vector<std::size_t> starts(n);
  std::iota(starts.begin(), starts.end(), 0);
  {
    Rng rng(derive_seed(seed, {0}));
    for (std::size_t i = n; i > 1; --i) std::swap(starts[i - 1], starts[rng.below(i)]);
  }

  const std::size_t runs = static_cast<std::size_t>(restarts);
  std::vector<std::vector<std::size_t>> paths(runs);
  parallel_for(runs, [&](std::size_t r) {
    std::size_t start = 0;
    if (r < n) {
      start = starts[r];
    } else {
      Rng rng(derive_seed(seed, {1, r}));
      start = rng.below(n);
    }
    paths[r] = greedy_path(mi, start);
    two_opt(mi, paths[r]);
  });

  std::size_t best = 0;
  double best_w = chain_weight(mi, paths[0]);
  for (std::size_t r = 1; r < runs; ++r) {
    const double w = chain_weight(mi, paths[r]);
    if (w > best_w + kGainTolerance) {
      best_w = w;
      best = r;
    }
  }
  return build_graph(mi, Topology::chain, paths[best]);
}

void validate_permutation(std::span<const std::size_t> permutation, std::size_t n) {
  if (permutation.size() != n)
    throw ValidationError("permutation has length " + std::to_string(permutation.size()) +
                          ", expected " + std::to_string(n));
  std::vector<bool> seen(n, false);
  for (std::size_t p : permutation) {
    if (p >= n || seen[p]) throw ValidationError("permutation is not a bijection on 0..n-1");
    seen[p] = true;
  }
}

InteractionGraph build_graph(const MiMatrix& mi, Topology topology,
                             std::vector<std::size_t> permutation,
                             std::span<const std::pair<std::size_t, std::size_t>> custom_edges) {
  validate_permutation(permutation, mi.n);
  const std::size_t n = mi.n;
  InteractionGraph g;
  g.topology = topology;
  g.bins = mi.bins;
  auto weight = [&](std::size_t p, std::size_t q) { return mi(permutation[p], permutation[q]); };
  switch (topology) {
    case Topology::chain:
      for (std::size_t p = 0; p + 1 < n; ++p) g.edges.push_back({p, p + 1, weight(p, p + 1)});
      break;
    case Topology::all_pairs:
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) g.edges.push_back({p, q, weight(p, q)});
      break;
    case Topology::custom_edge_list:
      for (const auto& [p, q] : custom_edges) {
        if (p >= n || q >= n) throw ValidationError("custom edge endpoint out of range");
        g.edges.push_back({p, q, weight(p, q)});
      }
      break;
  }
  g.permutation = std::move(permutation);
  validate_graph(g);
  return g;
}

void validate_graph(const InteractionGraph& graph) {
  const std::size_t n = graph.qubits();
  validate_permutation(graph.permutation, n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Edge& e : graph.edges) {
    if (e.i >= n || e.j >= n) throw ValidationError("graph edge endpoint out of range");
    if (e.i == e.j) throw ValidationError("graph edge is a self-loop");
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw ValidationError("graph edge weight must be finite and non-negative");
    if (!seen.insert({std::min(e.i, e.j), std::max(e.i, e.j)}).second)
      throw ValidationError("duplicate graph edge (" + std::to_string(e.i) + ", " +
                            std::to_string(e.j) + ")");
  }
  if (graph.topology == Topology::chain) {
    if (graph.edges.size() + 1 != n && n > 0)
      throw ValidationError("chain topology needs exactly n-1 edges");
    for (std::size_t p = 0; p < graph.edges.size(); ++p)
      if (std::min(graph.edges[p].i, graph.edges[p].j) != p || std::max(graph.edges[p].i, graph.edges[p].j) != p + 1)
        throw ValidationError("chain edges must join consecutive qubits");
  }
}

std::string mi_to_json(const MiMatrix& mi) {
  nlohmann::json j;
  j["bins"] = mi.bins;
  j["n"] = mi.n;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < mi.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < mi.n; ++k) row.push_back(mi(i, k));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  return j.dump(2) + "\n";
}

MiMatrix mi_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MiMatrix mi;
    mi.bins = j.at("bins").get<int>();
    mi.n = j.at("n").get<std::size_t>();
    const auto& rows = j.at("values");
    if (rows.size() != mi.n) throw ValidationError("MI matrix row count does not match n");
    for (const auto& row : rows) {
      if (row.size() != mi.n) throw ValidationError("MI matrix row length does not match n");
      for (const auto& v : row) mi.values.push_back(v.get<double>());
    }
    for (std::size_t i = 0; i < mi.n; ++i)
      for (std::size_t k = 0; k < mi.n; ++k)
        if (mi(i, k) != mi(k, i) || mi(i, k) < 0.0)
          throw ValidationError("MI matrix must be symmetric and non-negative");
    return mi;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed MI matrix JSON: ") + e.what());
  }
}

std::string graph_to_json(const InteractionGraph& graph) {
  nlohmann::json j;
  j["permutation"] = graph.permutation;
  j["topology"] = to_string(graph.topology);
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : graph.edges) edges.push_back(nlohmann::json::array({e.i, e.j, e.weight}));
  j["edges"] = std::move(edges);
  j["bins"] = graph.bins;
  return j.dump(2) + "\n";
}

InteractionGraph graph_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    InteractionGraph g;
    g.permutation = j.at("permutation").get<std::vector<std::size_t>>();
    g.topology = parse_topology(j.at("topology").get<std::string>());
    g.bins = j.value("bins", 8);
    for (const auto& e : j.at("edges")) {
      if (e.size() != 3) throw ValidationError("graph edge must be [i, j, weight]");
      g.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
    validate_graph(g);
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed graph JSON: ") + e.what());
  }
}

}  // namespace dqfe
