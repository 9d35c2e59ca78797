#pragma once

#include <cstdint>
#include <random>

namespace entangle {

/// SplitMix64 output function applied to `x + 0x9E3779B97F4A7C15`.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-trial seed: the (index + 1)-th output of a SplitMix64 stream seeded
/// with `master`, i.e. splitmix64(master + index * 0x9E3779B97F4A7C15).
/// Published test vectors live in tests/data/seed_vectors.json.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Random stream used by every stochastic operation.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// derives floats and bounded integers with explicit bit recipes rather than
/// the implementation-defined std:: distributions, so streams reproduce across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) from the top 53 bits of one draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// One draw; true with probability p.
  bool bernoulli(double p) { return uniform() < p; }

  /// Unbiased integer in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace entangle
