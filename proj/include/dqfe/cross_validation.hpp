#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqfe/forest.hpp"

namespace dqfe {

/// Fold id per label. Within each class the members are shuffled and dealt
/// round-robin, continuing the dealer position across classes, so every
/// fold's class counts are within one of perfect proportion.
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed);

struct CvReport {
  int folds = 5;
  int repetitions = 10;
  std::uint64_t seed = 0;
  ForestParams params;
  /// repetitions x folds, repetition-major.
  std::vector<double> accuracies;
  double mean = 0.0;
  /// Population standard deviation of `accuracies`.
  double stddev = 0.0;
};

/// Repeated stratified k-fold CV over the train rows of `table`. Fold
/// assignment for repetition r depends only on (seed, r); the forest for
/// (r, fold) is seeded from (params.seed, r, fold).
CvReport cross_validate(const FeatureTable& table, const ForestParams& params, int folds,
                        int repetitions, std::uint64_t seed);

struct GridSearchResult {
  std::size_t best_index = 0;
  ForestParams best;
  CvReport report;
  std::vector<double> means;  // per grid point
};

/// Every grid point sees the same fold assignments. Highest mean wins;
/// earlier grid entries win ties.
GridSearchResult grid_search(const FeatureTable& table, std::span<const ForestParams> grid, int folds,
                             int repetitions, std::uint64_t seed);

/// Stand-in grid: n_trees {100, 300} x max_depth {8, unlimited} x
/// min_samples_leaf {1, 3}, max_features sqrt.
std::vector<ForestParams> default_grid(std::uint64_t seed);

struct SeedEvaluation {
  std::vector<std::uint64_t> seeds;
  std::vector<double> accuracies;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Trains on all train rows once per seed and scores the test rows.
SeedEvaluation multi_seed_eval(const FeatureTable& table, const ForestParams& params,
                               std::span<const std::uint64_t> seeds);

/// Population mean and standard deviation.
std::pair<double, double> mean_std(std::span<const double> values);

nlohmann::json cv_report_to_json(const CvReport& report);
CvReport cv_report_from_json(const nlohmann::json& j);

}  // namespace dqfe
