#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace rankagg {

template <typename Beats>
std::vector<Element> kwikSort(std::vector<Element> group, std::uint64_t seed, Beats&& beats) {
  std::vector<Element> out;
  out.reserve(group.size());
  // Explicit stack of pending subproblems; the right part is pushed first so
  // the left part is emitted first.
  std::vector<std::vector<Element>> stack;
  stack.push_back(std::move(group));
  while (!stack.empty()) {
    auto current = std::move(stack.back());
    stack.pop_back();
    if (current.empty()) continue;
    if (current.size() == 1) {
      out.push_back(current.front());
      continue;
    }
    const auto pivotIt = std::min_element(current.begin(), current.end(), [&](Element a, Element b) {
      const auto pa = pivotPriority(seed, a);
      const auto pb = pivotPriority(seed, b);
      return pa != pb ? pa < pb : a < b;
    });
    const Element pivot = *pivotIt;
    std::vector<Element> left;
    std::vector<Element> right;
    for (Element v : current) {
      if (v == pivot) continue;
      (beats(v, pivot) ? left : right).push_back(v);
    }
    stack.push_back(std::move(right));
    stack.push_back({pivot});
    stack.push_back(std::move(left));
  }
  return out;
}

}  // namespace rankagg
