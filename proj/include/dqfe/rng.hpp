#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace dqfe {

/// SplitMix64 step. Used to expand seeds and to derive independent
/// sub-stream seeds from (seed, index, ...) tuples.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic seed derivation: mixes a base seed with a list of indices.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// xoshiro256** generator with SplitMix64 seeding.
///
/// All outputs (including the real and bounded-integer helpers) are defined
/// purely in terms of 64-bit integer arithmetic, so sequences are
/// bit-identical across compilers and platforms. The standard library
/// distributions are deliberately not used for that reason.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next(); }
  result_type next();

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace dqfe
