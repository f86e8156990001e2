#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rankagg/permutation.hpp"

namespace rankagg {

enum class Metric {
  Hamming,
  WeightedHamming,
  Footrule,
  Kendall,
  WeightedKendall,
  Ulam,
  WeightedUlam,
};

bool isWeighted(Metric metric) noexcept;
std::string_view toString(Metric metric) noexcept;
/// Accepts the enumerator names case-insensitively plus short forms
/// ("hamming", "whamming", "footrule", "kendall", "wkendall", "ulam", "wulam").
Metric parseMetric(std::string_view name);

/// Ulam distance reported in both units. indel == 2 * moves.
struct UlamDistance {
  double moves = 0.0;
  double indel = 0.0;
};

std::int64_t hamming(const Permutation& p, const Permutation& q);
/// Sum over mismatched positions i of (w[p[i]] + w[q[i]]) / 2.
double hamming(const Permutation& p, const Permutation& q, const WeightVector& w);

std::int64_t footrule(const Permutation& p, const Permutation& q);

/// Inversion count via a Fenwick tree over relabeled positions, O(n log n).
std::int64_t kendall(const Permutation& p, const Permutation& q);
double kendall(const Permutation& p, const Permutation& q, const WeightVector& w);

/// n - LCS(p, q) via longest increasing subsequence, O(n log n).
UlamDistance ulam(const Permutation& p, const Permutation& q);
/// W_total - (max-weight common subsequence), via max-weight increasing
/// subsequence over the relabeled sequence.
UlamDistance ulam(const Permutation& p, const Permutation& q, const WeightVector& w);

/// Metric dispatch. Weighted metrics require `w`; Ulam metrics return the
/// indel distance.
double distance(Metric metric, const Permutation& p, const Permutation& q,
                const WeightVector* w = nullptr);

/// Mean distance from x to every member of P.
double cost(const Permutation& x, const Instance& P, Metric metric);

}  // namespace rankagg
