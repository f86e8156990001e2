#include "rankagg/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace rankagg::oracles {

MedianResult exactMedian(const Instance& P, Metric metric, const OracleBudget& budget) {
  if (P.n > budget.maxN) {
    throw BudgetExceeded("exactMedian: n=" + std::to_string(P.n) + " exceeds budget " +
                         std::to_string(budget.maxN));
  }
  std::vector<Element> v(P.n);
  std::iota(v.begin(), v.end(), 1);
  std::vector<Element> best = v;
  double bestCost = std::numeric_limits<double>::infinity();
  do {
    const Permutation x(v);
    const double c = cost(x, P, metric);
    if (c < bestCost) {
      bestCost = c;
      best = v;
    }
  } while (std::next_permutation(v.begin(), v.end()));
  return {Permutation(std::move(best)), bestCost};
}

ArcSetResult exactFeedbackArcSet(const std::vector<std::vector<double>>& edgeWeight,
                                 const OracleBudget& budget) {
  const std::size_t k = edgeWeight.size();
  if (k > budget.maxVertices) {
    throw BudgetExceeded("exactFeedbackArcSet: " + std::to_string(k) +
                         " vertices exceeds budget " + std::to_string(budget.maxVertices));
  }
  const std::size_t full = std::size_t{1} << k;
  // dp[S]: cheapest cost of placing exactly the vertices of S first.
  std::vector<double> dp(full, std::numeric_limits<double>::infinity());
  dp[0] = 0.0;
  for (std::size_t S = 0; S < full; ++S) {
    if (dp[S] == std::numeric_limits<double>::infinity()) continue;
    for (std::size_t v = 0; v < k; ++v) {
      if (S >> v & 1U) continue;
      double add = 0.0;
      for (std::size_t u = 0; u < k; ++u) {
        if (S >> u & 1U) add += edgeWeight[v][u];
      }
      const auto T = S | (std::size_t{1} << v);
      dp[T] = std::min(dp[T], dp[S] + add);
    }
  }
  // Rebuild the order front to back, taking the smallest vertex that keeps
  // the remaining suffix optimal. Costs are recomputed the same way so the
  // equality test is exact.
  std::vector<double> suffix(full, std::numeric_limits<double>::infinity());
  suffix[full - 1] = 0.0;
  for (std::size_t S = full; S-- > 0;) {
    if (S == full - 1) continue;
    for (std::size_t v = 0; v < k; ++v) {
      if (S >> v & 1U) continue;
      double add = 0.0;
      for (std::size_t u = 0; u < k; ++u) {
        if (S >> u & 1U) add += edgeWeight[v][u];
      }
      suffix[S] = std::min(suffix[S], add + suffix[S | (std::size_t{1} << v)]);
    }
  }
  ArcSetResult out{suffix[0], {}};
  std::size_t S = 0;
  while (out.order.size() < k) {
    for (std::size_t v = 0; v < k; ++v) {
      if (S >> v & 1U) continue;
      double add = 0.0;
      for (std::size_t u = 0; u < k; ++u) {
        if (S >> u & 1U) add += edgeWeight[v][u];
      }
      if (add + suffix[S | (std::size_t{1} << v)] == suffix[S]) {
        out.order.push_back(v);
        S |= std::size_t{1} << v;
        break;
      }
    }
  }
  return out;
}

VertexSetResult exactFeedbackVertexSet(const Digraph& g, const std::vector<double>& weights,
                                       const OracleBudget& budget) {
  const std::size_t k = g.size();
  if (k > budget.maxVertices) {
    throw BudgetExceeded("exactFeedbackVertexSet: " + std::to_string(k) +
                         " vertices exceeds budget " + std::to_string(budget.maxVertices));
  }
  auto weightOf = [&](std::size_t v) { return weights.empty() ? 1.0 : weights[v]; };
  const std::size_t full = std::size_t{1} << k;
  VertexSetResult best{std::numeric_limits<double>::infinity(), {}};
  for (std::size_t keep = 0; keep < full; ++keep) {
    double removedWeight = 0.0;
    for (std::size_t v = 0; v < k; ++v) {
      if (!(keep >> v & 1U)) removedWeight += weightOf(v);
    }
    if (removedWeight >= best.weight) continue;
    // A tournament is acyclic iff it has no directed triangle.
    bool cyclic = false;
    for (std::size_t a = 0; a < k && !cyclic; ++a) {
      if (!(keep >> a & 1U)) continue;
      for (std::size_t b = 0; b < k && !cyclic; ++b) {
        if (!(keep >> b & 1U) || !g.hasEdge(a, b)) continue;
        for (std::size_t c = 0; c < k; ++c) {
          if ((keep >> c & 1U) && g.hasEdge(b, c) && g.hasEdge(c, a)) {
            cyclic = true;
            break;
          }
        }
      }
    }
    if (cyclic) continue;
    best.weight = removedWeight;
    best.removed.clear();
    for (std::size_t v = 0; v < k; ++v) {
      if (!(keep >> v & 1U)) best.removed.push_back(v);
    }
  }
  return best;
}

double naiveCommonSubsequence(const Permutation& p, const Permutation& q, const WeightVector* w) {
  requireSameSize(p, q);
  const auto n = p.size();
  std::vector<std::vector<double>> L(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (p.at(i) == q.at(j)) {
        L[i][j] = L[i - 1][j - 1] + (w ? (*w)[p.at(i)] : 1.0);
      } else {
        L[i][j] = std::max(L[i - 1][j], L[i][j - 1]);
      }
    }
  }
  return L[n][n];
}

double naiveDistance(Metric metric, const Permutation& p, const Permutation& q,
                     const WeightVector* w) {
  requireSameSize(p, q);
  if (isWeighted(metric) && !w) {
    throw InvalidInput(std::string(toString(metric)) + " requires a weight vector");
  }
  const auto n = p.size();
  double total = 0.0;
  switch (metric) {
    case Metric::Hamming:
    case Metric::WeightedHamming:
      for (std::size_t i = 1; i <= n; ++i) {
        if (p.at(i) != q.at(i)) {
          total += metric == Metric::Hamming ? 1.0 : ((*w)[p.at(i)] + (*w)[q.at(i)]) / 2.0;
        }
      }
      return total;
    case Metric::Footrule:
      for (std::size_t i = 1; i <= n; ++i) {
        total += std::abs(static_cast<double>(p.at(i)) - static_cast<double>(q.at(i)));
      }
      return total;
    case Metric::Kendall:
    case Metric::WeightedKendall:
      for (Element a = 1; a <= static_cast<Element>(n); ++a) {
        for (Element b = a + 1; b <= static_cast<Element>(n); ++b) {
          const bool pa = p.positionOf(a) < p.positionOf(b);
          const bool qa = q.positionOf(a) < q.positionOf(b);
          if (pa != qa) total += metric == Metric::Kendall ? 1.0 : ((*w)[a] + (*w)[b]) / 2.0;
        }
      }
      return total;
    case Metric::Ulam:
      return 2.0 * (static_cast<double>(n) - naiveCommonSubsequence(p, q));
    case Metric::WeightedUlam:
      return 2.0 * (w->total() - naiveCommonSubsequence(p, q, w));
  }
  return total;
}

std::int64_t exhaustiveBlockEd(const std::vector<std::vector<CandidateBlock>>& C,
                               const BlockLayout& layout) {
  std::int64_t best = blockEdOf(C, {}, layout);
  std::vector<Choice> seq;
  auto rec = [&](auto&& self, std::size_t fromBlock) -> void {
    for (std::size_t j = fromBlock; j <= layout.K; ++j) {
      for (std::size_t a = 0; a < C[j - 1].size(); ++a) {
        seq.push_back({j, a});
        if (isValidSequence(C, seq)) {
          best = std::min(best, blockEdOf(C, seq, layout));
          self(self, j + 1);
        }
        seq.pop_back();
      }
    }
  };
  rec(rec, 1);
  return best;
}

}  // namespace rankagg::oracles
