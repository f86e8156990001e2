#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace rankagg {

/// Length of the longest strictly increasing subsequence (patience sorting).
std::size_t longestIncreasingLength(std::span<const std::int32_t> values);

/// Maximum total weight of a strictly increasing subsequence. `values` must
/// lie in [1, maxValue]; `weights[i]` belongs to `values[i]`.
double maxWeightIncreasing(std::span<const std::int32_t> values,
                           std::span<const double> weights,
                           std::int32_t maxValue);

}  // namespace rankagg
