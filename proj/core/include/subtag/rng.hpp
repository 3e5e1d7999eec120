#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace subtag {

/// Seeded generator with labelled child streams. Two streams derived from
/// the same seed under different labels are statistically independent, and
/// a stream is a pure function of (seed, label path).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Child stream; does not advance this generator.
  Rng stream(std::string_view label) const;
  Rng stream(std::uint64_t index) const;

  std::uint64_t next_u64();

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace subtag
