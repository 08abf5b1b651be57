#include "dqfe/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "dqfe/error.hpp"
#include "dqfe/rng.hpp"

namespace dqfe {

double standard_normal(Rng& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

FeatureTable make_blobs(const BlobSpec& spec) {
  if (spec.classes < 2 || spec.features < 2 || spec.train_per_class < 1)
    throw ValidationError("make_blobs: need >= 2 classes, >= 2 features and train rows");
  const auto classes = static_cast<std::size_t>(spec.classes);
  const std::size_t n = spec.features;

  Rng rng(derive_seed(spec.seed, {0}));
  std::vector<double> centers(classes * n);
  for (double& c : centers) c = spec.center_spread * standard_normal(rng);
  if (classes >= 2) {
    // Place the last class at a fixed distance from its neighbour along a
    // random direction.
    std::vector<double> dir(n);
    double norm = 0.0;
    for (double& d : dir) {
      d = standard_normal(rng);
      norm += d * d;
    }
    norm = std::sqrt(norm);
    const std::size_t a = classes - 2;
    const std::size_t b = classes - 1;
    for (std::size_t f = 0; f < n; ++f) centers[b * n + f] = centers[a * n + f] + spec.overlap_distance * dir[f] / norm;
  }

  std::vector<std::string> names;
  for (std::size_t f = 0; f < n; ++f) names.push_back("f" + std::to_string(f));
  std::vector<double> values;
  std::vector<int> labels;
  std::vector<Split> splits;
  Rng noise(derive_seed(spec.seed, {1}));
  for (Split split : {Split::train, Split::test}) {
    const std::size_t per = split == Split::train ? spec.train_per_class : spec.test_per_class;
    for (std::size_t c = 0; c < classes; ++c)
      for (std::size_t i = 0; i < per; ++i) {
        for (std::size_t f = 0; f < n; ++f) values.push_back(centers[c * n + f] + spec.noise * standard_normal(noise));
        labels.push_back(static_cast<int>(c));
        splits.push_back(split);
      }
  }
  return FeatureTable(std::move(names), std::move(values), std::move(labels), std::move(splits));
}

}  // namespace dqfe
