#include "dqfe/cross_validation.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "dqfe/error.hpp"
#include "dqfe/rng.hpp"

namespace dqfe {

std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Rng rng(seed);
  std::vector<int> assignment(labels.size(), -1);
  std::size_t dealer = 0;
  for (auto& [label, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(folds))
      throw ValidationError("class " + std::to_string(label) + " has " + std::to_string(members.size()) +
                            " train rows, fewer than " + std::to_string(folds) + " folds");
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.below(i)]);
    for (std::size_t idx : members) {
      assignment[idx] = static_cast<int>(dealer % static_cast<std::size_t>(folds));
      ++dealer;
    }
  }
  return assignment;
}

std::pair<double, double> mean_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

CvReport cross_validate(const FeatureTable& table, const ForestParams& params, int folds, int repetitions,
                        std::uint64_t seed) {
  if (repetitions < 1) throw ValidationError("cross-validation needs at least one repetition");
  validate_params(params);
  const auto train = table.indices(Split::train);
  std::vector<int> labels;
  labels.reserve(train.size());
  for (std::size_t r : train) labels.push_back(table.labels()[r]);

  CvReport report{folds, repetitions, seed, params, {}, 0.0, 0.0};
  for (int rep = 0; rep < repetitions; ++rep) {
    const auto assignment =
        stratified_folds(labels, folds, derive_seed(seed, {static_cast<std::uint64_t>(rep)}));
    for (int fold = 0; fold < folds; ++fold) {
      std::vector<std::size_t> fit_rows;
      std::vector<std::size_t> held_rows;
      for (std::size_t k = 0; k < train.size(); ++k)
        (assignment[k] == fold ? held_rows : fit_rows).push_back(train[k]);
      ForestParams p = params;
      p.seed = derive_seed(params.seed, {static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(fold)});
      const TrainedForest forest = train_forest(table, fit_rows, p);
      report.accuracies.push_back(accuracy(forest, table, held_rows));
    }
  }
  std::tie(report.mean, report.stddev) = mean_std(report.accuracies);
  return report;
}

GridSearchResult grid_search(const FeatureTable& table, std::span<const ForestParams> grid, int folds,
                             int repetitions, std::uint64_t seed) {
  if (grid.empty()) throw ValidationError("grid_search: empty parameter grid");
  GridSearchResult result;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CvReport report = cross_validate(table, grid[g], folds, repetitions, seed);
    result.means.push_back(report.mean);
    if (g == 0 || report.mean > result.report.mean) {
      result.best_index = g;
      result.best = grid[g];
      result.report = std::move(report);
    }
  }
  return result;
}

std::vector<ForestParams> default_grid(std::uint64_t seed) {
  std::vector<ForestParams> grid;
  for (int trees : {100, 300})
    for (std::optional<int> depth : {std::optional<int>(8), std::optional<int>()})
      for (int leaf : {1, 3}) {
        ForestParams p;
        p.n_trees = trees;
        p.max_depth = depth;
        p.min_samples_leaf = leaf;
        p.max_features = {MaxFeatures::Kind::sqrt, 1.0};
        p.seed = seed;
        grid.push_back(p);
      }
  return grid;
}

SeedEvaluation multi_seed_eval(const FeatureTable& table, const ForestParams& params,
                               std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ValidationError("multi_seed_eval: at least one seed is required");
  const auto train = table.indices(Split::train);
  const auto test = table.indices(Split::test);
  if (test.empty()) throw ValidationError("multi_seed_eval: no test rows");
  SeedEvaluation out;
  out.seeds.assign(seeds.begin(), seeds.end());
  for (std::uint64_t s : seeds) {
    ForestParams p = params;
    p.seed = s;
    out.accuracies.push_back(accuracy(train_forest(table, train, p), table, test));
  }
  std::tie(out.mean, out.stddev) = mean_std(out.accuracies);
  return out;
}

nlohmann::json cv_report_to_json(const CvReport& report) {
  nlohmann::json j;
  j["folds"] = report.folds;
  j["repetitions"] = report.repetitions;
  j["seed"] = report.seed;
  j["params"] = params_to_json(report.params);
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < report.repetitions; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int f = 0; f < report.folds; ++f)
      row.push_back(report.accuracies[static_cast<std::size_t>(r * report.folds + f)]);
    rows.push_back(std::move(row));
  }
  j["accuracies"] = std::move(rows);
  j["mean"] = report.mean;
  j["std"] = report.stddev;
  return j;
}

CvReport cv_report_from_json(const nlohmann::json& j) {
  try {
    CvReport r;
    r.folds = j.at("folds").get<int>();
    r.repetitions = j.at("repetitions").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params = params_from_json(j.at("params"));
    for (const auto& row : j.at("accuracies"))
      for (const auto& v : row) r.accuracies.push_back(v.get<double>());
    if (r.accuracies.size() != static_cast<std::size_t>(r.folds * r.repetitions))
      throw ValidationError("CV report accuracy matrix has the wrong shape");
    r.mean = j.at("mean").get<double>();
    r.stddev = j.at("std").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed CV report: ") + e.what());
  }
}

}  // namespace dqfe
