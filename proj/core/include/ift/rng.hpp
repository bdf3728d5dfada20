#pragma once

#include <cstdint>

namespace ift {

/// Counter-based generator: output i is a keyed SplitMix64 finalizer of i.
/// Streams derived with split() are independent of draw order, which keeps
/// parallel scans reproducible.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed)), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on [lo, hi].
  double uniform(double lo, double hi);
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  /// Seed of child stream `index`; a pure function of (seed, index).
  std::uint64_t child_seed(std::uint64_t index) const;
  CounterRng split(std::uint64_t index) const { return CounterRng(child_seed(index)); }

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t key_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace ift
