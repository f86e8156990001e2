#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rankagg {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hashLabel(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives an independent seed for (label, index) from a base seed, so that
/// every sample index gets its own stream regardless of evaluation order.
constexpr std::uint64_t deriveSeed(std::uint64_t base, std::string_view label,
                                   std::uint64_t index = 0) noexcept {
  return splitmix64(splitmix64(base ^ hashLabel(label)) + index);
}

using Rng = std::mt19937_64;

inline Rng makeRng(std::uint64_t base, std::string_view label, std::uint64_t index = 0) {
  return Rng(deriveSeed(base, label, index));
}

/// Uniform integer in [0, bound) without relying on implementation-defined
/// distribution algorithms, so streams are reproducible across standard
/// libraries.
inline std::uint64_t uniformBelow(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace rankagg
