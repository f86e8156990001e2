#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankagg {

/// Elements and positions are 1-based throughout the public API.
using Element = std::int32_t;

/// Sentinel used inside intermediate strings for "no element here".
inline constexpr Element kDummy = 0;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A permutation of {1..n} in one-line notation with a cached inverse.
///
/// `at(i)` is the element at position i, `positionOf(e)` the position of
/// element e. Both are 1-based. Instances are immutable once built.
class Permutation {
 public:
  /// Validates that `oneLine` is a bijection on {1..n}; throws InvalidInput.
  explicit Permutation(std::vector<Element> oneLine);

  static Permutation identity(std::size_t n);
  static Permutation reversed(std::size_t n);

  std::size_t size() const noexcept { return forward_.size(); }
  Element at(std::size_t position) const { return forward_[position - 1]; }
  std::size_t positionOf(Element e) const {
    return static_cast<std::size_t>(inverse_[static_cast<std::size_t>(e)]);
  }

  std::span<const Element> oneLine() const noexcept { return forward_; }
  /// inverse()[e] is the position of e; index 0 is unused.
  std::span<const std::int32_t> inverse() const noexcept { return inverse_; }

  std::string toString() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.forward_ == b.forward_;
  }
  friend std::strong_ordering operator<=>(const Permutation& a,
                                          const Permutation& b) {
    return a.forward_ <=> b.forward_;
  }

 private:
  std::vector<Element> forward_;
  std::vector<std::int32_t> inverse_;
};

/// Per-element nonnegative weights; `w[e]` for e in 1..n.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);
  static WeightVector uniform(std::size_t n, double value = 1.0);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](Element e) const { return w_[static_cast<std::size_t>(e) - 1]; }
  std::span<const double> values() const noexcept { return w_; }
  double total() const noexcept { return total_; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> w_;
  double total_ = 0.0;
};

/// The input multiset P of m permutations over a shared n.
struct Instance {
  std::size_t n = 0;
  std::vector<Permutation> perms;
  std::optional<WeightVector> weights;

  Instance() = default;
  explicit Instance(std::vector<Permutation> ps,
                    std::optional<WeightVector> w = std::nullopt);

  std::size_t m() const noexcept { return perms.size(); }
  const WeightVector* weightsOrNull() const noexcept {
    return weights ? &*weights : nullptr;
  }
  /// Sub-instance holding the members at `indices` (weights carried over).
  Instance subset(std::span<const std::size_t> indices) const;
};

void requireSameSize(const Permutation& p, const Permutation& q);

}  // namespace rankagg
