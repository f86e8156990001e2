#pragma once

#include <cstdint>

#include "rankagg/permutation.hpp"

namespace rankagg {

/// Position k takes the element found there in at least two members of Q.
/// Unresolved positions receive the unused elements, ascending, in ascending
/// position order. Requires |Q| = 3. Weights do not change the output.
Permutation hammingMajorityMedian(const Instance& Q);

/// Position-wise median z, then rank i goes to the position holding the i-th
/// smallest z value (ties by smaller position). Requires |Q| = 3. Unweighted.
Permutation footruleMedian(const Instance& Q);

/// Pseudo-permutation of position-wise medians; z[k-1] is the median at k.
std::vector<Element> positionwiseMedian(const Instance& Q);

/// KWIK-SORT on the majority tournament of Q with seeded pivot priorities.
/// Requires |Q| = 3 so every pair has a strict majority. Weights only enter
/// the objective, not the tournament orientation.
Permutation kendallKwikSortMedian(const Instance& Q, std::uint64_t seed);

/// Triangle-removal feedback vertex set on the majority tournament of five
/// orderings. Output: topological order of the remaining elements, then the
/// removed ones ascending. Uses local-ratio removal when Q carries weights.
Permutation ulamFvsMedian(const Instance& Q);

}  // namespace rankagg
