#include "rankagg/local_solvers.hpp"

#include <algorithm>
#include <numeric>

#include "rankagg/tournament.hpp"

namespace rankagg {
namespace {

void requireSize(const Instance& Q, std::size_t r, const char* who) {
  if (Q.m() != r) {
    throw InvalidInput(std::string(who) + " requires exactly " + std::to_string(r) +
                       " permutations, got " + std::to_string(Q.m()));
  }
}

}  // namespace

Permutation hammingMajorityMedian(const Instance& Q) {
  requireSize(Q, 3, "hammingMajorityMedian");
  const auto n = Q.n;
  const auto& a = Q.perms[0];
  const auto& b = Q.perms[1];
  const auto& c = Q.perms[2];
  std::vector<Element> y(n, kDummy);
  std::vector<bool> used(n + 1, false);
  for (std::size_t k = 1; k <= n; ++k) {
    Element e = kDummy;
    if (a.at(k) == b.at(k) || a.at(k) == c.at(k)) {
      e = a.at(k);
    } else if (b.at(k) == c.at(k)) {
      e = b.at(k);
    }
    if (e != kDummy) {
      y[k - 1] = e;
      used[static_cast<std::size_t>(e)] = true;
    }
  }
  Element next = 1;
  for (auto& slot : y) {
    if (slot != kDummy) continue;
    while (used[static_cast<std::size_t>(next)]) ++next;
    slot = next;
    used[static_cast<std::size_t>(next)] = true;
  }
  return Permutation(std::move(y));
}

std::vector<Element> positionwiseMedian(const Instance& Q) {
  requireSize(Q, 3, "positionwiseMedian");
  std::vector<Element> z(Q.n);
  for (std::size_t k = 1; k <= Q.n; ++k) {
    Element v[3] = {Q.perms[0].at(k), Q.perms[1].at(k), Q.perms[2].at(k)};
    std::sort(v, v + 3);
    z[k - 1] = v[1];
  }
  return z;
}

Permutation footruleMedian(const Instance& Q) {
  const auto z = positionwiseMedian(Q);
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return z[x] < z[y]; });
  std::vector<Element> y(z.size());
  for (std::size_t i = 0; i < order.size(); ++i) y[order[i]] = static_cast<Element>(i + 1);
  return Permutation(std::move(y));
}

Permutation kendallKwikSortMedian(const Instance& Q, std::uint64_t seed) {
  requireSize(Q, 3, "kendallKwikSortMedian");
  const auto& p = Q.perms;
  auto beats = [&](Element u, Element v) {
    int votes = 0;
    for (const auto& q : p) votes += q.positionOf(u) < q.positionOf(v);
    return votes >= 2;
  };
  std::vector<Element> group(Q.n);
  std::iota(group.begin(), group.end(), 1);
  return Permutation(kwikSort(std::move(group), seed, beats));
}

Permutation ulamFvsMedian(const Instance& Q) {
  requireSize(Q, 5, "ulamFvsMedian");
  const auto g = majorityTournament(Q);
  std::vector<bool> alive(Q.n, true);
  std::vector<double> weights;
  if (Q.weights) weights.assign(Q.weights->values().begin(), Q.weights->values().end());
  auto removed = removeTriangles(g, alive, weights);
  std::vector<Element> y;
  y.reserve(Q.n);
  for (auto v : topologicalOrder(g, alive)) y.push_back(static_cast<Element>(v + 1));
  std::sort(removed.begin(), removed.end());
  for (auto v : removed) y.push_back(static_cast<Element>(v + 1));
  return Permutation(std::move(y));
}

}  // namespace rankagg
