#include "rankagg/distance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "rankagg/lis.hpp"

namespace rankagg {
namespace {

// seq[k] = position in q of the element at position k+1 of p.
std::vector<std::int32_t> relabel(const Permutation& p, const Permutation& q) {
  std::vector<std::int32_t> seq(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    seq[k] = static_cast<std::int32_t>(q.positionOf(p.at(k + 1)));
  }
  return seq;
}

template <typename T>
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, T{}) {}
  void add(std::size_t i, T v) {
    for (; i < tree_.size(); i += i & (~i + 1)) tree_[i] += v;
  }
  T prefix(std::size_t i) const {
    T s{};
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<T> tree_;
};

const WeightVector& requireWeights(const WeightVector* w, Metric metric) {
  if (!w) {
    throw InvalidInput(std::string(toString(metric)) + " requires a weight vector");
  }
  return *w;
}

}  // namespace

std::size_t longestIncreasingLength(std::span<const std::int32_t> values) {
  std::vector<std::int32_t> tails;
  tails.reserve(values.size());
  for (auto v : values) {
    auto it = std::lower_bound(tails.begin(), tails.end(), v);
    if (it == tails.end()) {
      tails.push_back(v);
    } else {
      *it = v;
    }
  }
  return tails.size();
}

double maxWeightIncreasing(std::span<const std::int32_t> values,
                           std::span<const double> weights,
                           std::int32_t maxValue) {
  // Fenwick tree over values holding prefix maxima of chain weights.
  std::vector<double> tree(static_cast<std::size_t>(maxValue) + 1, 0.0);
  double best = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    double before = 0.0;
    for (auto i = static_cast<std::size_t>(values[k]) - 1; i > 0; i -= i & (~i + 1)) {
      before = std::max(before, tree[i]);
    }
    const double here = before + weights[k];
    best = std::max(best, here);
    for (auto i = static_cast<std::size_t>(values[k]); i < tree.size(); i += i & (~i + 1)) {
      tree[i] = std::max(tree[i], here);
    }
  }
  return best;
}

bool isWeighted(Metric metric) noexcept {
  return metric == Metric::WeightedHamming || metric == Metric::WeightedKendall ||
         metric == Metric::WeightedUlam;
}

std::string_view toString(Metric metric) noexcept {
  switch (metric) {
    case Metric::Hamming: return "hamming";
    case Metric::WeightedHamming: return "weighted-hamming";
    case Metric::Footrule: return "footrule";
    case Metric::Kendall: return "kendall";
    case Metric::WeightedKendall: return "weighted-kendall";
    case Metric::Ulam: return "ulam";
    case Metric::WeightedUlam: return "weighted-ulam";
  }
  return "?";
}

Metric parseMetric(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (c != '-' && c != '_') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "hamming") return Metric::Hamming;
  if (s == "weightedhamming" || s == "whamming") return Metric::WeightedHamming;
  if (s == "footrule" || s == "spearman") return Metric::Footrule;
  if (s == "kendall" || s == "kendalltau") return Metric::Kendall;
  if (s == "weightedkendall" || s == "wkendall") return Metric::WeightedKendall;
  if (s == "ulam") return Metric::Ulam;
  if (s == "weightedulam" || s == "wulam") return Metric::WeightedUlam;
  throw InvalidInput("unknown metric '" + std::string(name) + "'");
}

std::int64_t hamming(const Permutation& p, const Permutation& q) {
  requireSameSize(p, q);
  std::int64_t d = 0;
  for (std::size_t i = 1; i <= p.size(); ++i) d += p.at(i) != q.at(i);
  return d;
}

double hamming(const Permutation& p, const Permutation& q, const WeightVector& w) {
  requireSameSize(p, q);
  if (w.size() != p.size()) throw InvalidInput("weight vector length differs from n");
  double d = 0.0;
  for (std::size_t i = 1; i <= p.size(); ++i) {
    if (p.at(i) != q.at(i)) d += (w[p.at(i)] + w[q.at(i)]) / 2.0;
  }
  return d;
}

std::int64_t footrule(const Permutation& p, const Permutation& q) {
  requireSameSize(p, q);
  std::int64_t d = 0;
  for (std::size_t i = 1; i <= p.size(); ++i) d += std::abs(p.at(i) - q.at(i));
  return d;
}

std::int64_t kendall(const Permutation& p, const Permutation& q) {
  requireSameSize(p, q);
  const auto seq = relabel(p, q);
  Fenwick<std::int64_t> seen(seq.size());
  std::int64_t inversions = 0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto v = static_cast<std::size_t>(seq[k]);
    inversions += static_cast<std::int64_t>(k) - seen.prefix(v);
    seen.add(v, 1);
  }
  return inversions;
}

double kendall(const Permutation& p, const Permutation& q, const WeightVector& w) {
  requireSameSize(p, q);
  if (w.size() != p.size()) throw InvalidInput("weight vector length differs from n");
  const auto seq = relabel(p, q);
  Fenwick<std::int64_t> count(seq.size());
  Fenwick<double> weight(seq.size());
  double totalWeight = 0.0;
  double d = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto v = static_cast<std::size_t>(seq[k]);
    const double we = w[p.at(k + 1)];
    const auto greater = static_cast<std::int64_t>(k) - count.prefix(v);
    const double greaterWeight = totalWeight - weight.prefix(v);
    d += (greaterWeight + static_cast<double>(greater) * we) / 2.0;
    count.add(v, 1);
    weight.add(v, we);
    totalWeight += we;
  }
  return d;
}

UlamDistance ulam(const Permutation& p, const Permutation& q) {
  requireSameSize(p, q);
  const auto seq = relabel(p, q);
  const auto lcs = longestIncreasingLength(seq);
  const double moves = static_cast<double>(p.size() - lcs);
  return {moves, 2.0 * moves};
}

UlamDistance ulam(const Permutation& p, const Permutation& q, const WeightVector& w) {
  requireSameSize(p, q);
  if (w.size() != p.size()) throw InvalidInput("weight vector length differs from n");
  const auto seq = relabel(p, q);
  std::vector<double> ws(seq.size());
  double total = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    ws[k] = w[p.at(k + 1)];
    total += ws[k];
  }
  const double kept =
      maxWeightIncreasing(seq, ws, static_cast<std::int32_t>(seq.size()));
  const double moves = std::max(0.0, total - kept);
  return {moves, 2.0 * moves};
}

double distance(Metric metric, const Permutation& p, const Permutation& q,
                const WeightVector* w) {
  switch (metric) {
    case Metric::Hamming: return static_cast<double>(hamming(p, q));
    case Metric::WeightedHamming: return hamming(p, q, requireWeights(w, metric));
    case Metric::Footrule: return static_cast<double>(footrule(p, q));
    case Metric::Kendall: return static_cast<double>(kendall(p, q));
    case Metric::WeightedKendall: return kendall(p, q, requireWeights(w, metric));
    case Metric::Ulam: return ulam(p, q).indel;
    case Metric::WeightedUlam: return ulam(p, q, requireWeights(w, metric)).indel;
  }
  throw InvalidInput("unknown metric");
}

double cost(const Permutation& x, const Instance& P, Metric metric) {
  if (P.perms.empty()) throw InvalidInput("cost over an empty instance");
  double total = 0.0;
  for (const auto& p : P.perms) total += distance(metric, x, p, P.weightsOrNull());
  return total / static_cast<double>(P.m());
}

}  // namespace rankagg
