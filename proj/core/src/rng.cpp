#include "subtag/rng.hpp"

#include <cassert>

namespace subtag {

namespace {

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::stream(std::string_view label) const {
  return Rng(splitmix64(seed_ ^ splitmix64(fnv1a(label))));
}

Rng Rng::stream(std::uint64_t index) const {
  return Rng(splitmix64(seed_ + splitmix64(index ^ 0x5ca1ab1eULL)));
}

std::uint64_t Rng::next_u64() { return engine_(); }

std::uint64_t Rng::uniform(std::uint64_t bound) {
  assert(bound != 0);
  // Rejection on the top of the range keeps the draw exactly uniform and
  // independent of the standard library's distribution implementation.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

}  // namespace subtag
