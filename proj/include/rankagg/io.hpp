#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "rankagg/permutation.hpp"
#include "rankagg/rng.hpp"

namespace rankagg {

/// Thrown on malformed instance text; carries the 1-based line and column.
class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Instance text format:
///   n m
///   <m lines of n space-separated elements>
///   [w <n weights>]
Instance parseInstance(std::string_view text);
Instance readInstanceFile(const std::string& path);
std::string formatInstance(const Instance& instance);

Permutation parsePermutation(std::string_view line);

Permutation randomPermutation(std::size_t n, Rng& rng);

/// Moves one uniformly chosen element to a uniformly chosen different slot.
Permutation randomMove(const Permutation& p, Rng& rng);

struct PlantedInstance {
  Instance instance;
  Permutation center;
};

Instance generateUniform(std::size_t n, std::size_t m, std::uint64_t seed);
/// Each member is `center` perturbed by `moves` random element moves.
PlantedInstance generatePlanted(std::size_t n, std::size_t m, std::size_t moves,
                                std::uint64_t seed);

}  // namespace rankagg
