#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace flevy {

using Rng = std::mt19937_64;

// Purpose tags for child streams. Values are part of the reproducibility
// contract: changing them changes every seeded output.
enum class Stream : std::uint64_t {
  PositiveSide = 1,
  NegativeSide = 2,
  LeftTail = 3,
  RightTail = 4,
  Y0 = 5,
  Replication = 6,
  Experiment = 7,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds the tags into the root seed one at a time, so (root, a, b) and
// (root, b, a) land on unrelated streams.
constexpr std::uint64_t child_seed(std::uint64_t root,
                                   std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = splitmix64(root ^ 0x6a09e667f3bcc909ULL);
  for (auto t : tags) h = splitmix64(h ^ splitmix64(t + 0x3c6ef372fe94f82bULL));
  return h;
}

constexpr std::uint64_t child_seed(std::uint64_t root, Stream s, std::uint64_t index = 0) noexcept {
  return child_seed(root, {static_cast<std::uint64_t>(s), index});
}

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

}  // namespace flevy
