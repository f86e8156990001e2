#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rankagg/permutation.hpp"

namespace rankagg {

/// Dense directed graph on vertices 0..k-1 stored as bit rows. Used for
/// majority tournaments (every pair oriented) and for the partially oriented
/// graphs of block reconstruction (pairs may be unconnected).
class Digraph {
 public:
  explicit Digraph(std::size_t k = 0);

  std::size_t size() const noexcept { return k_; }
  bool hasEdge(std::size_t from, std::size_t to) const {
    return (out_[from * words_ + to / 64] >> (to % 64)) & 1U;
  }
  void addEdge(std::size_t from, std::size_t to) {
    out_[from * words_ + to / 64] |= std::uint64_t{1} << (to % 64);
    in_[to * words_ + from / 64] |= std::uint64_t{1} << (from % 64);
  }
  bool connected(std::size_t a, std::size_t b) const {
    return hasEdge(a, b) || hasEdge(b, a);
  }

  std::span<const std::uint64_t> outRow(std::size_t v) const {
    return {out_.data() + v * words_, words_};
  }
  std::span<const std::uint64_t> inRow(std::size_t v) const {
    return {in_.data() + v * words_, words_};
  }
  std::size_t words() const noexcept { return words_; }

 private:
  std::size_t k_;
  std::size_t words_;
  std::vector<std::uint64_t> out_;
  std::vector<std::uint64_t> in_;
};

/// Vertex v stands for element v+1. Edge a->b iff a precedes b in a strict
/// majority of the members of Q. Pairs with a tied vote stay unconnected.
Digraph majorityTournament(const Instance& Q);

/// Removes vertices until no directed triangle remains among the alive ones.
///
/// Triangles are taken in lexicographic order of their sorted vertex triple.
/// Without weights all three vertices of each triangle are removed. With
/// weights the local-ratio rule is applied: the smallest residual weight of
/// the triangle is subtracted from all three and every vertex whose residual
/// reaches zero is removed (identical to the unweighted rule for unit weights).
/// `alive` is updated in place; returns the removed vertices in removal order.
std::vector<std::size_t> removeTriangles(const Digraph& g, std::vector<bool>& alive,
                                         std::span<const double> weights = {});

/// Orders the alive vertices of an acyclic tournament (sources first): a
/// vertex beating more alive vertices comes earlier. Requires that every pair
/// of alive vertices is connected and no triangle remains.
std::vector<std::size_t> topologicalOrder(const Digraph& g, const std::vector<bool>& alive);

/// Priority of an element in the seeded KWIK-SORT pivot order; the pivot of
/// every subproblem is its lowest-priority element (ties by element value).
std::uint64_t pivotPriority(std::uint64_t seed, Element e) noexcept;

/// KWIK-SORT over the vertices `group` of a tournament given by `beats`,
/// with pivots chosen by `pivotPriority`. Vertices are elements.
template <typename Beats>
std::vector<Element> kwikSort(std::vector<Element> group, std::uint64_t seed, Beats&& beats);

}  // namespace rankagg

#include "rankagg/detail/kwiksort_impl.hpp"
