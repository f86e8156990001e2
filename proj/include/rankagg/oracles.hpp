#pragma once

// Brute-force reference engines. Exponential by design; callers keep inputs
// within OracleBudget. Used by the test suites and the `verify` subcommand,
// never by the production pipelines.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rankagg/distance.hpp"
#include "rankagg/permutation.hpp"
#include "rankagg/reconstruct.hpp"
#include "rankagg/tournament.hpp"

namespace rankagg::oracles {

struct OracleBudget {
  std::size_t maxN = 8;
  std::size_t maxVertices = 14;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MedianResult {
  Permutation median;
  double cost;
};

/// Enumerates S_n in lexicographic order; the first strict minimum wins.
MedianResult exactMedian(const Instance& P, Metric metric, const OracleBudget& budget = {});

struct ArcSetResult {
  double weight;
  /// Optimal linear order of the vertices (0-based), lexicographically first
  /// among optimal orders built front to back.
  std::vector<std::size_t> order;
};

/// Minimum feedback arc set by Held-Karp style subset DP.
/// `edgeWeight[a][b]` is the weight of edge a->b (0 when absent); an order
/// pays edgeWeight[a][b] whenever b is placed before a.
ArcSetResult exactFeedbackArcSet(const std::vector<std::vector<double>>& edgeWeight,
                                 const OracleBudget& budget = {});

struct VertexSetResult {
  double weight;
  std::vector<std::size_t> removed;  // ascending
};

/// Minimum-weight vertex set whose removal leaves the tournament acyclic.
/// Empty `weights` means unit weights.
VertexSetResult exactFeedbackVertexSet(const Digraph& g, const std::vector<double>& weights = {},
                                       const OracleBudget& budget = {});

/// Quadratic transcriptions of the distance definitions. Ulam metrics return
/// the indel distance, matching `distance`.
double naiveDistance(Metric metric, const Permutation& p, const Permutation& q,
                     const WeightVector* w = nullptr);

/// Quadratic LCS (maximum-weight common subsequence when w is given).
double naiveCommonSubsequence(const Permutation& p, const Permutation& q,
                              const WeightVector* w = nullptr);

/// Minimum BlockED over every valid choice sequence, by plain recursion.
/// Exponential in the number of candidates; meant for K <= 3 and a handful
/// of candidates per block.
std::int64_t exhaustiveBlockEd(const std::vector<std::vector<CandidateBlock>>& C,
                               const BlockLayout& layout);

}  // namespace rankagg::oracles
