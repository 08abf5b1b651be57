#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dqfe/error.hpp"
#include "dqfe/forest.hpp"
#include "dqfe/parallel.hpp"
#include "dqfe/synthetic.hpp"

using namespace dqfe;

namespace {

FeatureTable make_table(std::vector<std::vector<double>> rows, std::vector<int> labels) {
  std::vector<double> values;
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  std::vector<std::string> names;
  for (std::size_t c = 0; c < rows.front().size(); ++c) names.push_back("f" + std::to_string(c));
  return FeatureTable(names, values, labels, std::vector<Split>(labels.size(), Split::train));
}

FeatureTable xor_table() {
  return make_table({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0});
}

ForestParams exact_params(int trees, std::optional<int> depth) {
  ForestParams p;
  p.n_trees = trees;
  p.max_depth = depth;
  p.max_features.kind = MaxFeatures::Kind::all;
  p.bootstrap = false;
  return p;
}

double train_accuracy(const TrainedForest& f, const FeatureTable& t) {
  const auto rows = t.indices(Split::train);
  return accuracy(f, t, rows);
}

}  // namespace

TEST(MaxFeaturesTest, Resolve) {
  EXPECT_EQ(MaxFeatures{}.resolve(15), 3U);
  EXPECT_EQ(MaxFeatures{}.resolve(44), 6U);
  EXPECT_EQ(MaxFeatures{}.resolve(1), 1U);
  EXPECT_EQ((MaxFeatures{MaxFeatures::Kind::all}).resolve(7), 7U);
  EXPECT_EQ((MaxFeatures{MaxFeatures::Kind::fraction, 0.5}).resolve(9), 4U);
  EXPECT_EQ((MaxFeatures{MaxFeatures::Kind::fraction, 0.01}).resolve(9), 1U);
  EXPECT_EQ(parse_max_features("0.25"), (MaxFeatures{MaxFeatures::Kind::fraction, 0.25}));
  EXPECT_EQ(parse_max_features(to_string(MaxFeatures{})), MaxFeatures{});
  EXPECT_THROW(parse_max_features("1.5"), ValidationError);
  EXPECT_THROW(parse_max_features("0"), ValidationError);
}

TEST(Params, Validation) {
  ForestParams p;
  EXPECT_NO_THROW(validate_params(p));
  p.n_trees = 0;
  EXPECT_THROW(validate_params(p), ValidationError);
  p = {};
  p.max_depth = 0;
  EXPECT_THROW(validate_params(p), ValidationError);
  p = {};
  p.min_samples_leaf = 0;
  EXPECT_THROW(validate_params(p), ValidationError);
}

TEST(Tree, SignRuleSeparatedByOneThreshold) {
  const auto t = make_table({{-2}, {-1}, {-0.5}, {0.5}, {1}, {3}}, {0, 0, 0, 1, 1, 1});
  const auto f = train_forest(t, exact_params(1, 1));
  EXPECT_EQ(train_accuracy(f, t), 1.0);
  ASSERT_EQ(f.trees[0].nodes(), 3U);
  EXPECT_EQ(f.trees[0].threshold[0], 0.0);
  // Stump prediction equals the threshold rule.
  for (double x : {-10.0, -0.01, 0.0, 0.01, 7.0}) {
    const std::vector<double> v{x};
    EXPECT_EQ(predict_one(f, v), x <= 0.0 ? 0 : 1);
  }
}

TEST(Tree, ConstantFeaturesGiveSingleLeaf) {
  const auto t = make_table({{1, 2}, {1, 2}, {1, 2}, {1, 2}, {1, 2}}, {0, 1, 1, 2, 1});
  ForestParams p;
  p.n_trees = 10;
  const auto f = train_forest(t, p);
  for (const auto& tree : f.trees) EXPECT_EQ(tree.nodes(), 1U);
  const std::vector<double> x{5, 5};
  EXPECT_EQ(predict_one(f, x), 1);
}

TEST(Tree, XorAtDepthTwo) {
  const auto t = xor_table();
  const auto f = train_forest(t, exact_params(1, 2));
  EXPECT_EQ(train_accuracy(f, t), 1.0);
  EXPECT_EQ(f.trees[0].depth(), 2U);
  // A stump cannot represent XOR.
  EXPECT_LT(train_accuracy(train_forest(t, exact_params(1, 1)), t), 1.0);
}

TEST(Tree, MinSamplesLeafRespected) {
  const FeatureTable t = make_blobs({.classes = 3, .features = 4, .train_per_class = 30, .test_per_class = 1});
  ForestParams p;
  p.n_trees = 5;
  p.min_samples_leaf = 7;
  p.bootstrap = false;
  const auto f = train_forest(t, p);
  for (const auto& tree : f.trees)
    for (std::size_t k = 0; k < tree.nodes(); ++k)
      if (tree.feature[k] < 0) {
        std::uint32_t n = 0;
        for (int c = 0; c < f.classes; ++c) n += tree.counts[k * 3 + static_cast<std::size_t>(c)];
        EXPECT_GE(n, 7U);
      }
}

TEST(Tree, StructuralInvariants) {
  const FeatureTable t = make_blobs({.classes = 4, .features = 6, .train_per_class = 25, .test_per_class = 5});
  ForestParams p;
  p.n_trees = 20;
  const auto f = train_forest(t, p);
  for (const auto& tree : f.trees)
    for (std::size_t k = 0; k < tree.nodes(); ++k) {
      if (tree.feature[k] >= 0) {
        EXPECT_LT(static_cast<std::size_t>(tree.feature[k]), f.feature_count);
        EXPECT_GT(tree.left[k], static_cast<int>(k));
        EXPECT_GT(tree.right[k], static_cast<int>(k));
      }
      std::uint32_t n = 0;
      for (int c = 0; c < f.classes; ++c) n += tree.counts[k * 4 + static_cast<std::size_t>(c)];
      EXPECT_GT(n, 0U);
    }
}

TEST(Forest, DuplicateTreesPredictLikeOne) {
  const FeatureTable t = make_blobs({.classes = 3, .features = 5, .train_per_class = 20, .test_per_class = 10});
  const auto single = train_forest(t, exact_params(1, std::nullopt));
  // Without bootstrap and with every feature a candidate, every tree is identical.
  const auto many = train_forest(t, exact_params(7, std::nullopt));
  for (const auto& tree : many.trees) EXPECT_EQ(tree, single.trees[0]);
  EXPECT_EQ(predict(many, t), predict(single, t));
}

TEST(Forest, VoteTieGoesToLowestClass) {
  const std::vector<double> totals{0, 4, 2, 4, 1};
  EXPECT_EQ(argmax_class(totals), 1);
  std::vector<double> scaled;
  for (double v : totals) scaled.push_back(v * 3.5);
  EXPECT_EQ(argmax_class(scaled), 1);
}

TEST(Forest, DeterministicAndThreadIndependent) {
  const FeatureTable t = make_blobs({.features = 8, .train_per_class = 40, .test_per_class = 10, .seed = 2});
  ForestParams p;
  p.n_trees = 30;
  p.seed = 77;
  set_default_threads(1);
  const auto a = train_forest(t, p);
  set_default_threads(3);
  const auto b = train_forest(t, p);
  set_default_threads(0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(forest_to_json(a), forest_to_json(b));
  p.seed = 78;
  EXPECT_NE(train_forest(t, p), a);
}

TEST(Forest, UnlimitedDepthFitsAtLeastAsWellAsStump) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const FeatureTable t = make_blobs({.features = 6, .train_per_class = 30, .test_per_class = 5,
                                       .noise = 2.0, .seed = seed});
    ForestParams deep;
    deep.n_trees = 20;
    deep.seed = seed;
    ForestParams stump = deep;
    stump.max_depth = 1;
    EXPECT_GE(train_accuracy(train_forest(t, deep), t), train_accuracy(train_forest(t, stump), t));
  }
  const auto x = xor_table();
  EXPECT_GE(train_accuracy(train_forest(x, exact_params(1, std::nullopt)), x),
            train_accuracy(train_forest(x, exact_params(1, 1)), x));
}

TEST(Forest, TrainsOnTrainRowsOnly) {
  // Test rows carry flipped labels; they must not influence the model.
  const auto base = make_table({{0}, {1}, {2}, {3}}, {0, 0, 1, 1});
  std::vector<double> values{0, 1, 2, 3, 0.5, 2.5};
  const FeatureTable t({"f0"}, values, {0, 0, 1, 1, 1, 0},
                       {Split::train, Split::train, Split::train, Split::train, Split::test, Split::test});
  const auto f = train_forest(t, exact_params(1, std::nullopt));
  EXPECT_EQ(f.trees[0], train_forest(base, exact_params(1, std::nullopt)).trees[0]);
  const auto test = t.indices(Split::test);
  EXPECT_EQ(accuracy(f, t, test), 0.0);
}

TEST(Forest, SplitCountsAndJsonRoundTrip) {
  const FeatureTable t = make_blobs({.classes = 3, .features = 4, .train_per_class = 20, .test_per_class = 2});
  ForestParams p;
  p.n_trees = 5;
  p.max_depth = 4;
  p.max_features = {MaxFeatures::Kind::fraction, 0.5};
  const auto f = train_forest(t, p);
  const auto counts = split_counts(f);
  std::size_t internal = 0;
  for (const auto& tree : f.trees)
    for (int feat : tree.feature) internal += feat >= 0;
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), internal);
  const auto back = forest_from_json(forest_to_json(f));
  EXPECT_EQ(back, f);
  EXPECT_EQ(params_from_json(params_to_json(p)), p);
  EXPECT_THROW(forest_from_json(R"({"format": "other"})"), std::exception);
}
