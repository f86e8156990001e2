#include "doctest.h"
#include "rankagg/io.hpp"
#include "rankagg/oracles.hpp"

using namespace rankagg;
using namespace rankagg::oracles;

namespace {
Permutation P(std::initializer_list<Element> v) { return Permutation(std::vector<Element>(v)); }

Digraph cycles(std::size_t count) {
  Digraph g(3 * count);
  for (std::size_t c = 0; c < count; ++c) {
    const auto o = 3 * c;
    g.addEdge(o, o + 1);
    g.addEdge(o + 1, o + 2);
    g.addEdge(o + 2, o);
    for (std::size_t v = o + 3; v < 3 * count; ++v) {
      for (std::size_t u = o; u < o + 3; ++u) g.addEdge(u, v);
    }
  }
  return g;
}
}  // namespace

TEST_CASE("exact median examples") {
  const auto p = P({3, 1, 2, 4});
  auto r = exactMedian(Instance({p}), Metric::Kendall);
  CHECK(r.median == p);
  CHECK(r.cost == 0);
  r = exactMedian(Instance({P({1, 2, 3}), P({3, 2, 1})}), Metric::Kendall);
  CHECK(r.cost == 1.5);
  CHECK(r.median == P({1, 2, 3}));
  for (auto metric : {Metric::Hamming, Metric::Footrule, Metric::Kendall, Metric::Ulam}) {
    r = exactMedian(Instance({p, p, p}), metric);
    CHECK(r.median == p);
    CHECK(r.cost == 0);
  }
  CHECK_THROWS_AS(exactMedian(generateUniform(9, 2, 1), Metric::Kendall), BudgetExceeded);
}

TEST_CASE("exact feedback arc set examples") {
  const std::vector<std::vector<double>> acyclic{{0, 1, 1}, {0, 0, 1}, {0, 0, 0}};
  CHECK(exactFeedbackArcSet(acyclic).weight == 0);
  CHECK(exactFeedbackArcSet(acyclic).order == std::vector<std::size_t>{0, 1, 2});
  const std::vector<std::vector<double>> cycle{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  CHECK(exactFeedbackArcSet(cycle).weight == 1);
  const std::vector<std::vector<double>> weighted{{0, 1, 0}, {0, 0, 2}, {3, 0, 0}};
  CHECK(exactFeedbackArcSet(weighted).weight == 1);
  // Scaling every weight scales the optimum.
  auto scaled = weighted;
  for (auto& row : scaled) {
    for (auto& x : row) x *= 2.5;
  }
  CHECK(exactFeedbackArcSet(scaled).weight == doctest::Approx(2.5));
  CHECK_THROWS_AS(exactFeedbackArcSet(std::vector<std::vector<double>>(15, std::vector<double>(15))),
                  BudgetExceeded);
}

TEST_CASE("exact feedback vertex set examples") {
  Digraph acyclic(4);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) acyclic.addEdge(a, b);
  }
  CHECK(exactFeedbackVertexSet(acyclic).weight == 0);
  CHECK(exactFeedbackVertexSet(acyclic).removed.empty());
  CHECK(exactFeedbackVertexSet(cycles(1)).weight == 1);
  CHECK(exactFeedbackVertexSet(cycles(2)).weight == 2);
  const std::vector<double> w{4, 2, 7};
  const auto r = exactFeedbackVertexSet(cycles(1), w);
  CHECK(r.weight == 2);
  CHECK(r.removed == std::vector<std::size_t>{1});
  const std::vector<double> w2{8, 4, 14};
  CHECK(exactFeedbackVertexSet(cycles(1), w2).weight == 4);
}

TEST_CASE("naive distances") {
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    CHECK(naiveDistance(Metric::Kendall, Permutation::identity(n), Permutation::reversed(n)) ==
          static_cast<double>(n * (n - 1) / 2));
    for (auto metric : {Metric::Hamming, Metric::Footrule, Metric::Kendall, Metric::Ulam}) {
      CHECK(naiveDistance(metric, Permutation::identity(n), Permutation::identity(n)) == 0);
    }
  }
  CHECK(naiveDistance(Metric::Ulam, P({1, 2, 3, 4}), P({2, 3, 4, 1})) == 2);
  const WeightVector w({5, 1, 1});
  CHECK(naiveCommonSubsequence(P({1, 2, 3}), P({3, 1, 2}), &w) == 6);
}

TEST_CASE("naive distances agree with the fast kernels") {
  auto rng = makeRng(17, "naive");
  for (int t = 0; t < 300; ++t) {
    const auto n = 1 + uniformBelow(rng, 40);
    const auto p = randomPermutation(n, rng), q = randomPermutation(n, rng);
    std::vector<double> wv(n);
    for (auto& x : wv) x = static_cast<double>(uniformBelow(rng, 9));
    const WeightVector w(wv);
    for (auto metric : {Metric::Hamming, Metric::WeightedHamming, Metric::Footrule, Metric::Kendall,
                        Metric::WeightedKendall, Metric::Ulam, Metric::WeightedUlam}) {
      CHECK(naiveDistance(metric, p, q, &w) == distance(metric, p, q, &w));
    }
  }
}

TEST_CASE("exhaustive block search on the empty case") {
  const auto L = blockLayout(9, {});
  std::vector<std::vector<CandidateBlock>> C(L.K);
  CHECK(exhaustiveBlockEd(C, L) == 5 * static_cast<std::int64_t>(L.K * L.b + 9));
}
