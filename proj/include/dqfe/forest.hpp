#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqfe/dataset.hpp"

namespace dqfe {

struct MaxFeatures {
  enum class Kind { sqrt, all, fraction };
  Kind kind = Kind::sqrt;
  double fraction = 1.0;

  /// Candidate features per split for a problem with `features` columns.
  std::size_t resolve(std::size_t features) const;
  bool operator==(const MaxFeatures&) const = default;
};

/// "sqrt", "all", or a number in (0, 1].
MaxFeatures parse_max_features(const std::string& text);
std::string to_string(const MaxFeatures& mf);

struct ForestParams {
  int n_trees = 100;
  std::optional<int> max_depth;  // nullopt: grow until pure
  int min_samples_leaf = 1;
  MaxFeatures max_features;
  std::uint64_t seed = 0;
  /// Resample N rows with replacement per tree. Off means every tree sees
  /// the training rows exactly once.
  bool bootstrap = true;

  bool operator==(const ForestParams&) const = default;
};

void validate_params(const ForestParams& params);

/// Node arrays. feature[k] < 0 marks a leaf. Samples with
/// x[feature] <= threshold go left. counts holds `classes` entries per node.
struct DecisionTree {
  std::vector<int> feature;
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<std::uint32_t> counts;

  std::size_t nodes() const { return feature.size(); }
  std::size_t depth() const;
  std::size_t leaf_for(std::span<const double> x) const;
  bool operator==(const DecisionTree&) const = default;
};

struct TrainedForest {
  int classes = 0;
  std::size_t feature_count = 0;
  ForestParams params;
  std::vector<DecisionTree> trees;
  bool operator==(const TrainedForest&) const = default;
};

/// Grows params.n_trees Gini trees on the given rows. Each split inspects
/// max_features random candidate columns (more if all candidates are
/// constant) and keeps the largest impurity decrease; ties go to the lowest
/// feature index, then the lowest threshold. Thresholds are midpoints
/// between adjacent distinct values. Tree t draws from a stream seeded by
/// (params.seed, t), so results do not depend on the thread schedule.
TrainedForest train_forest(const FeatureTable& table, std::span<const std::size_t> rows,
                           const ForestParams& params);

/// Trains on the rows tagged train.
TrainedForest train_forest(const FeatureTable& table, const ForestParams& params);

/// Summed leaf class counts over all trees.
std::vector<double> vote_totals(const TrainedForest& forest, std::span<const double> x);

/// Argmax of vote totals, lowest class on ties.
int argmax_class(std::span<const double> totals);

int predict_one(const TrainedForest& forest, std::span<const double> x);
std::vector<int> predict(const TrainedForest& forest, const FeatureTable& table,
                         std::span<const std::size_t> rows);
std::vector<int> predict(const TrainedForest& forest, const FeatureTable& table);

/// Fraction of rows whose prediction equals the label.
double accuracy(const TrainedForest& forest, const FeatureTable& table, std::span<const std::size_t> rows);

/// Number of internal nodes splitting on each feature, summed over trees.
std::vector<std::size_t> split_counts(const TrainedForest& forest);

nlohmann::json params_to_json(const ForestParams& params);
ForestParams params_from_json(const nlohmann::json& j);
std::string forest_to_json(const TrainedForest& forest);
TrainedForest forest_from_json(const std::string& text);

}  // namespace dqfe
