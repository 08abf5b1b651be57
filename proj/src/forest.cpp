#include "dqfe/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dqfe/error.hpp"
#include "dqfe/parallel.hpp"
#include "dqfe/rng.hpp"

namespace dqfe {

namespace {

constexpr int kFormatVersion = 1;

// Training rows with every feature replaced by its dense rank among the
// training values. Splits compare ranks; thresholds are recovered from the
// distinct sorted values.
struct TrainingData {
  std::size_t rows = 0;
  std::size_t features = 0;
  int classes = 0;
  std::vector<std::uint32_t> ranks;          // features x rows
  std::vector<std::vector<double>> distinct;  // per feature, ascending
  std::vector<int> labels;

  std::uint32_t rank(std::size_t f, std::size_t r) const { return ranks[f * rows + r]; }
};

struct SplitChoice {
  int feature = -1;
  std::uint32_t rank = 0;  // go left when rank <= this
  double score = -1.0;     // sum_c nL_c^2 / nL + sum_c nR_c^2 / nR
};

class TreeBuilder {
 public:
  TreeBuilder(const TrainingData& data, const ForestParams& params, std::uint64_t seed)
      : data_(data),
        params_(params),
        rng_(seed),
        mtry_(params.max_features.resolve(data.features)),
        feature_order_(data.features),
        weight_(data.rows, 0) {
    std::iota(feature_order_.begin(), feature_order_.end(), 0);
  }

  DecisionTree build() {
    if (params_.bootstrap) {
      for (std::size_t k = 0; k < data_.rows; ++k) ++weight_[rng_.below(data_.rows)];
    } else {
      std::fill(weight_.begin(), weight_.end(), 1U);
    }
    std::vector<std::uint32_t> sample;
    for (std::size_t r = 0; r < data_.rows; ++r)
      if (weight_[r] > 0) sample.push_back(static_cast<std::uint32_t>(r));
    keys_.resize(sample.size());
    grow(sample, 0, sample.size(), 0);
    return std::move(tree_);
  }

 private:
  int add_node(std::span<const std::uint32_t> counts) {
    tree_.feature.push_back(-1);
    tree_.threshold.push_back(0.0);
    tree_.left.push_back(-1);
    tree_.right.push_back(-1);
    tree_.counts.insert(tree_.counts.end(), counts.begin(), counts.end());
    return static_cast<int>(tree_.feature.size() - 1);
  }

  int grow(std::vector<std::uint32_t>& sample, std::size_t begin, std::size_t end, int depth) {
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(data_.classes), 0);
    std::size_t n = 0;
    for (std::size_t k = begin; k < end; ++k) {
      counts[static_cast<std::size_t>(data_.labels[sample[k]])] += weight_[sample[k]];
      n += weight_[sample[k]];
    }
    const int node = add_node(counts);

    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    const auto msl = static_cast<std::size_t>(params_.min_samples_leaf);
    if (pure || n < 2 * msl || (params_.max_depth && depth >= *params_.max_depth)) return node;

    const SplitChoice split = best_split(sample, begin, end, n);
    if (split.feature < 0) return node;

    const auto f = static_cast<std::size_t>(split.feature);
    const auto mid = std::partition(sample.begin() + static_cast<std::ptrdiff_t>(begin),
                                    sample.begin() + static_cast<std::ptrdiff_t>(end),
                                    [&](std::uint32_t r) { return data_.rank(f, r) <= split.rank; });
    const auto cut = static_cast<std::size_t>(mid - sample.begin());

    const auto& values = data_.distinct[f];
    const double lo = values[split.rank];
    const double hi = values[split.rank + 1];
    double threshold = lo + (hi - lo) / 2.0;
    if (!(threshold < hi)) threshold = lo;

    tree_.feature[static_cast<std::size_t>(node)] = split.feature;
    tree_.threshold[static_cast<std::size_t>(node)] = threshold;
    const int l = grow(sample, begin, cut, depth + 1);
    tree_.left[static_cast<std::size_t>(node)] = l;
    const int r = grow(sample, cut, end, depth + 1);
    tree_.right[static_cast<std::size_t>(node)] = r;
    return node;
  }

  SplitChoice best_split(const std::vector<std::uint32_t>& sample, std::size_t begin, std::size_t end,
                         std::size_t n) {
    const std::size_t nf = data_.features;
    const std::size_t m = end - begin;
    const auto msl = static_cast<std::size_t>(params_.min_samples_leaf);

    // Draw candidates by a partial Fisher-Yates shuffle. Columns that are
    // constant on this node do not count towards mtry.
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < nf && candidates.size() < mtry_; ++k) {
      std::swap(feature_order_[k], feature_order_[k + rng_.below(nf - k)]);
      const std::size_t f = feature_order_[k];
      const std::uint32_t first = data_.rank(f, sample[begin]);
      bool constant = true;
      for (std::size_t i = begin + 1; i < end && constant; ++i) constant = data_.rank(f, sample[i]) == first;
      if (!constant) candidates.push_back(f);
    }
    std::sort(candidates.begin(), candidates.end());

    SplitChoice best;
    const std::size_t classes = static_cast<std::size_t>(data_.classes);
    std::vector<std::uint64_t> left(classes);
    std::vector<std::uint64_t> right(classes);
    for (std::size_t f : candidates) {
      for (std::size_t i = 0; i < m; ++i) {
        const std::uint32_t r = sample[begin + i];
        keys_[i] = (static_cast<std::uint64_t>(data_.rank(f, r)) << 32) | r;
      }
      std::sort(keys_.begin(), keys_.begin() + static_cast<std::ptrdiff_t>(m));

      std::fill(left.begin(), left.end(), 0);
      std::fill(right.begin(), right.end(), 0);
      for (std::size_t k = begin; k < end; ++k)
        right[static_cast<std::size_t>(data_.labels[sample[k]])] += weight_[sample[k]];
      double sq_left = 0.0;
      double sq_right = 0.0;
      for (auto c : right) sq_right += static_cast<double>(c) * static_cast<double>(c);

      std::size_t nl = 0;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        const auto r = static_cast<std::uint32_t>(keys_[i] & 0xFFFFFFFFU);
        const auto c = static_cast<std::size_t>(data_.labels[r]);
        const double w = weight_[r];
        sq_left += w * (2.0 * static_cast<double>(left[c]) + w);
        sq_right -= w * (2.0 * static_cast<double>(right[c]) - w);
        left[c] += weight_[r];
        right[c] -= weight_[r];
        nl += weight_[r];
        const std::size_t nr = n - nl;
        if ((keys_[i] >> 32) == (keys_[i + 1] >> 32) || nl < msl || nr < msl) continue;
        const double score = sq_left / static_cast<double>(nl) + sq_right / static_cast<double>(nr);
        // Candidates and thresholds are visited in ascending order, so only
        // a strict improvement may replace the incumbent.
        if (score > best.score + 1e-12 * std::abs(best.score))
          best = {static_cast<int>(f), static_cast<std::uint32_t>(keys_[i] >> 32), score};
      }
    }
    return best;
  }

  const TrainingData& data_;
  const ForestParams& params_;
  Rng rng_;
  std::size_t mtry_;
  std::vector<std::size_t> feature_order_;
  std::vector<std::uint32_t> weight_;
  std::vector<std::uint64_t> keys_;
  DecisionTree tree_;
};

TrainingData gather(const FeatureTable& table, std::span<const std::size_t> rows, int classes) {
  TrainingData d;
  d.rows = rows.size();
  d.features = table.cols();
  d.classes = classes;
  d.ranks.resize(d.rows * d.features);
  d.distinct.resize(d.features);
  d.labels.resize(d.rows);
  for (std::size_t k = 0; k < rows.size(); ++k) d.labels[k] = table.labels()[rows[k]];
  std::vector<double> column(d.rows);
  for (std::size_t f = 0; f < d.features; ++f) {
    for (std::size_t k = 0; k < d.rows; ++k) column[k] = table.at(rows[k], f);
    auto& values = d.distinct[f];
    values = column;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k < d.rows; ++k)
      d.ranks[f * d.rows + k] =
          static_cast<std::uint32_t>(std::lower_bound(values.begin(), values.end(), column[k]) - values.begin());
  }
  return d;
}

}  // namespace

std::size_t MaxFeatures::resolve(std::size_t features) const {
  std::size_t k = features;
  switch (kind) {
    case Kind::sqrt: k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(features)))); break;
    case Kind::all: k = features; break;
    case Kind::fraction: k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(features))); break;
  }
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(features, 1));
}

MaxFeatures parse_max_features(const std::string& text) {
  if (text == "sqrt") return {MaxFeatures::Kind::sqrt, 1.0};
  if (text == "all") return {MaxFeatures::Kind::all, 1.0};
  double f = 0.0;
  try {
    std::size_t used = 0;
    f = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw ValidationError("max_features must be sqrt, all or a fraction, got '" + text + "'");
  }
  if (!(f > 0.0 && f <= 1.0)) throw ValidationError("max_features fraction must lie in (0, 1]");
  return {MaxFeatures::Kind::fraction, f};
}

std::string to_string(const MaxFeatures& mf) {
  switch (mf.kind) {
    case MaxFeatures::Kind::sqrt: return "sqrt";
    case MaxFeatures::Kind::all: return "all";
    case MaxFeatures::Kind::fraction: {
      nlohmann::json j = mf.fraction;
      return j.dump();
    }
  }
  return "sqrt";
}

void validate_params(const ForestParams& params) {
  if (params.n_trees < 1) throw ValidationError("n_trees must be positive");
  if (params.max_depth && *params.max_depth < 1) throw ValidationError("max_depth must be positive");
  if (params.min_samples_leaf < 1) throw ValidationError("min_samples_leaf must be positive");
  if (params.max_features.kind == MaxFeatures::Kind::fraction &&
      !(params.max_features.fraction > 0.0 && params.max_features.fraction <= 1.0))
    throw ValidationError("max_features fraction must lie in (0, 1]");
}

std::size_t DecisionTree::depth() const {
  if (feature.empty()) return 0;
  std::vector<std::size_t> d(nodes(), 0);
  std::size_t deepest = 0;
  // Children always have larger indices than their parent.
  for (std::size_t k = 0; k < nodes(); ++k) {
    deepest = std::max(deepest, d[k]);
    if (feature[k] >= 0) {
      d[static_cast<std::size_t>(left[k])] = d[k] + 1;
      d[static_cast<std::size_t>(right[k])] = d[k] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t k = 0;
  while (feature[k] >= 0)
    k = static_cast<std::size_t>(x[static_cast<std::size_t>(feature[k])] <= threshold[k] ? left[k] : right[k]);
  return k;
}

TrainedForest train_forest(const FeatureTable& table, std::span<const std::size_t> rows,
                           const ForestParams& params) {
  validate_params(params);
  if (rows.empty()) throw ValidationError("train_forest: no training rows");
  const int classes = table.num_classes();
  {
    std::vector<bool> present(static_cast<std::size_t>(classes), false);
    for (std::size_t r : rows) present[static_cast<std::size_t>(table.labels()[r])] = true;
    if (std::count(present.begin(), present.end(), true) < 2)
      throw ValidationError("train_forest: training rows contain fewer than two classes");
  }

  const TrainingData data = gather(table, rows, classes);
  TrainedForest forest{classes, table.cols(), params, std::vector<DecisionTree>(static_cast<std::size_t>(params.n_trees))};
  parallel_for(forest.trees.size(), [&](std::size_t t) {
    forest.trees[t] = TreeBuilder(data, params, derive_seed(params.seed, {t})).build();
  });
  return forest;
}

TrainedForest train_forest(const FeatureTable& table, const ForestParams& params) {
  const auto rows = table.indices(Split::train);
  return train_forest(table, rows, params);
}

std::vector<double> vote_totals(const TrainedForest& forest, std::span<const double> x) {
  if (x.size() != forest.feature_count)
    throw ValidationError("predict: sample has " + std::to_string(x.size()) + " features, forest expects " +
                          std::to_string(forest.feature_count));
  const auto classes = static_cast<std::size_t>(forest.classes);
  std::vector<double> totals(classes, 0.0);
  for (const DecisionTree& tree : forest.trees) {
    const std::size_t leaf = tree.leaf_for(x);
    for (std::size_t c = 0; c < classes; ++c) totals[c] += tree.counts[leaf * classes + c];
  }
  return totals;
}

int argmax_class(std::span<const double> totals) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < totals.size(); ++c)
    if (totals[c] > totals[best]) best = c;
  return static_cast<int>(best);
}

int predict_one(const TrainedForest& forest, std::span<const double> x) {
  return argmax_class(vote_totals(forest, x));
}

std::vector<int> predict(const TrainedForest& forest, const FeatureTable& table, std::span<const std::size_t> rows) {
  if (table.cols() != forest.feature_count)
    throw ValidationError("predict: table has " + std::to_string(table.cols()) + " features, forest expects " +
                          std::to_string(forest.feature_count));
  std::vector<int> out(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) out[k] = predict_one(forest, table.row(rows[k]));
  return out;
}

std::vector<int> predict(const TrainedForest& forest, const FeatureTable& table) {
  std::vector<std::size_t> rows(table.rows());
  std::iota(rows.begin(), rows.end(), 0);
  return predict(forest, table, rows);
}

double accuracy(const TrainedForest& forest, const FeatureTable& table, std::span<const std::size_t> rows) {
  if (rows.empty()) throw ValidationError("accuracy: no rows to evaluate");
  const auto pred = predict(forest, table, rows);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) hits += pred[k] == table.labels()[rows[k]];
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

std::vector<std::size_t> split_counts(const TrainedForest& forest) {
  std::vector<std::size_t> out(forest.feature_count, 0);
  for (const auto& tree : forest.trees)
    for (int f : tree.feature)
      if (f >= 0) ++out[static_cast<std::size_t>(f)];
  return out;
}

nlohmann::json params_to_json(const ForestParams& params) {
  nlohmann::json j;
  j["n_trees"] = params.n_trees;
  j["max_depth"] = params.max_depth ? nlohmann::json(*params.max_depth) : nlohmann::json(nullptr);
  j["min_samples_leaf"] = params.min_samples_leaf;
  if (params.max_features.kind == MaxFeatures::Kind::fraction) {
    j["max_features"] = params.max_features.fraction;
  } else {
    j["max_features"] = to_string(params.max_features);
  }
  j["seed"] = params.seed;
  j["bootstrap"] = params.bootstrap;
  return j;
}

ForestParams params_from_json(const nlohmann::json& j) {
  try {
    ForestParams p;
    p.n_trees = j.at("n_trees").get<int>();
    if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<int>();
    p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    const auto& mf = j.at("max_features");
    p.max_features = mf.is_string() ? parse_max_features(mf.get<std::string>())
                                    : MaxFeatures{MaxFeatures::Kind::fraction, mf.get<double>()};
    p.seed = j.value("seed", std::uint64_t{0});
    p.bootstrap = j.value("bootstrap", true);
    validate_params(p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed forest parameters: ") + e.what());
  }
}

std::string forest_to_json(const TrainedForest& forest) {
  nlohmann::json j;
  j["format"] = "dqfe-random-forest";
  j["version"] = kFormatVersion;
  j["classes"] = forest.classes;
  j["feature_count"] = forest.feature_count;
  j["params"] = params_to_json(forest.params);
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : forest.trees) {
    nlohmann::json tj;
    tj["feature"] = t.feature;
    tj["threshold"] = t.threshold;
    tj["left"] = t.left;
    tj["right"] = t.right;
    tj["counts"] = t.counts;
    trees.push_back(std::move(tj));
  }
  j["trees"] = std::move(trees);
  return j.dump() + "\n";
}

TrainedForest forest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "dqfe-random-forest")
      throw IoError("not a random-forest model file");
    if (j.at("version").get<int>() != kFormatVersion)
      throw IoError("unsupported model version " + std::to_string(j.at("version").get<int>()));
    TrainedForest f;
    f.classes = j.at("classes").get<int>();
    f.feature_count = j.at("feature_count").get<std::size_t>();
    f.params = params_from_json(j.at("params"));
    const auto classes = static_cast<std::size_t>(f.classes);
    for (const auto& tj : j.at("trees")) {
      DecisionTree t;
      t.feature = tj.at("feature").get<std::vector<int>>();
      t.threshold = tj.at("threshold").get<std::vector<double>>();
      t.left = tj.at("left").get<std::vector<int>>();
      t.right = tj.at("right").get<std::vector<int>>();
      t.counts = tj.at("counts").get<std::vector<std::uint32_t>>();
      const std::size_t n = t.feature.size();
      if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
          t.counts.size() != n * classes)
        throw ValidationError("model tree arrays have inconsistent lengths");
      for (std::size_t k = 0; k < n; ++k) {
        if (t.feature[k] >= static_cast<int>(f.feature_count))
          throw ValidationError("model node feature index out of range");
        if (t.feature[k] >= 0) {
          const auto l = static_cast<std::size_t>(t.left[k]);
          const auto r = static_cast<std::size_t>(t.right[k]);
          if (t.left[k] <= static_cast<int>(k) || t.right[k] <= static_cast<int>(k) || l >= n || r >= n)
            throw ValidationError("model node children out of range");
        } else {
          std::uint64_t total = 0;
          for (std::size_t c = 0; c < classes; ++c) total += t.counts[k * classes + c];
          if (total == 0) throw ValidationError("model leaf has no samples");
        }
      }
      f.trees.push_back(std::move(t));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace dqfe
