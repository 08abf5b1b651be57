#pragma once

#include <cstdint>

#include "dqfe/dataset.hpp"
#include "dqfe/rng.hpp"

namespace dqfe {

/// Gaussian class blobs. Class centres are drawn N(0, center_spread^2) per
/// feature; the last class is then moved to within `overlap_distance` of the
/// second-to-last so that pair is hard to separate. Noise is N(0, noise^2).
struct BlobSpec {
  int classes = 5;
  std::size_t features = 15;
  std::size_t train_per_class = 200;
  std::size_t test_per_class = 40;
  double center_spread = 1.0;
  double overlap_distance = 1.0;
  double noise = 1.0;
  std::uint64_t seed = 0;
};

/// Train rows first, then test rows, each block ordered by class.
FeatureTable make_blobs(const BlobSpec& spec);

/// Standard normal draw from the project RNG (Box-Muller).
double standard_normal(Rng& rng);

}  // namespace dqfe
