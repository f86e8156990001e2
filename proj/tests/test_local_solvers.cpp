#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "rankagg/io.hpp"
#include "rankagg/local_solvers.hpp"
#include "rankagg/oracles.hpp"
#include "rankagg/tournament.hpp"

using namespace rankagg;

namespace {
Permutation P(std::initializer_list<Element> v) { return Permutation(std::vector<Element>(v)); }

// Weight of the majority edges of Q that `y` reverses, edge weight (w_a + w_b) / 2.
double backEdgeWeight(const Instance& Q, const Permutation& y, const WeightVector& w) {
  const auto g = majorityTournament(Q);
  double total = 0.0;
  for (std::size_t a = 0; a < Q.n; ++a) {
    for (std::size_t b = 0; b < Q.n; ++b) {
      const auto ea = static_cast<Element>(a + 1), eb = static_cast<Element>(b + 1);
      if (g.hasEdge(a, b) && y.positionOf(ea) > y.positionOf(eb)) total += (w[ea] + w[eb]) / 2;
    }
  }
  return total;
}
}  // namespace

TEST_CASE("hamming majority examples") {
  CHECK(hammingMajorityMedian(Instance({P({1, 2, 3}), P({1, 2, 3}), P({2, 1, 3})})) == P({1, 2, 3}));
  CHECK(hammingMajorityMedian(Instance({P({1, 2, 3}), P({2, 3, 1}), P({3, 1, 2})})) == P({1, 2, 3}));
  const auto p = P({4, 2, 5, 1, 3});
  CHECK(hammingMajorityMedian(Instance({p, p, p})) == p);
  CHECK_THROWS_AS(hammingMajorityMedian(Instance({p, p})), InvalidInput);
}

TEST_CASE("footrule median examples") {
  CHECK(footruleMedian(Instance({P({1, 2, 3}), P({1, 2, 3}), P({3, 2, 1})})) == P({1, 2, 3}));
  const Instance Q({P({1, 2, 3}), P({2, 1, 3}), P({2, 3, 1})});
  CHECK(positionwiseMedian(Q) == std::vector<Element>{2, 2, 3});
  CHECK(footruleMedian(Q) == P({1, 2, 3}));
}

TEST_CASE("footrule median is closest to the pseudo-permutation") {
  auto rng = makeRng(2, "footrule-opt");
  for (int t = 0; t < 100; ++t) {
    const auto n = 1 + uniformBelow(rng, 6);
    const auto Q = generateUniform(n, 3, 1000 + t);
    const auto z = positionwiseMedian(Q);
    auto dist = [&](std::span<const Element> x) {
      std::int64_t d = 0;
      for (std::size_t k = 0; k < n; ++k) d += std::abs(x[k] - z[k]);
      return d;
    };
    std::vector<Element> v(n);
    std::iota(v.begin(), v.end(), 1);
    std::int64_t best = dist(v);
    while (std::next_permutation(v.begin(), v.end())) best = std::min(best, dist(v));
    CHECK(dist(footruleMedian(Q).oneLine()) == best);
  }
}

TEST_CASE("kwik-sort examples") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(kendallKwikSortMedian(Instance({P({1, 2, 3}), P({1, 2, 3}), P({2, 1, 3})}), seed) == P({1, 2, 3}));
    const auto p = P({3, 5, 1, 4, 2, 6});
    CHECK(kendallKwikSortMedian(Instance({p, p, p}), seed) == p);
  }
}

TEST_CASE("kwik-sort back edges against the exact arc set") {
  // Unit weights: the 3x tournament bound per instance, about 2x on average.
  // Element weights (w_a + w_b) / 2 do not steer the orientation, so only the
  // lower bound is checked for them.
  auto rng = makeRng(4, "kwik-fas");
  double ratioSum = 0.0;
  int counted = 0;
  for (int t = 0; t < 20; ++t) {
    const auto Q = generateUniform(6, 3, 40 + t);
    std::vector<double> wv(6);
    for (auto& x : wv) x = 1.0 + static_cast<double>(uniformBelow(rng, 5));
    for (bool weighted : {false, true}) {
      const WeightVector w = weighted ? WeightVector(wv) : WeightVector::uniform(6);
      const auto g = majorityTournament(Q);
      std::vector<std::vector<double>> edges(6, std::vector<double>(6, 0.0));
      for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = 0; b < 6; ++b) {
          if (g.hasEdge(a, b)) edges[a][b] = (w[Element(a + 1)] + w[Element(b + 1)]) / 2;
        }
      }
      const double opt = oracles::exactFeedbackArcSet(edges).weight;
      double sum = 0.0;
      for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const double got = backEdgeWeight(Q, kendallKwikSortMedian(Q, seed), w);
        CHECK(got >= opt - 1e-9);
        sum += got;
      }
      if (!weighted) {
        CHECK(sum / 200 <= 3 * opt + 1e-9);
        if (opt > 0) {
          ratioSum += sum / 200 / opt;
          ++counted;
        }
      }
    }
  }
  REQUIRE(counted > 0);
  CHECK(ratioSum / counted <= 2.0);
}

TEST_CASE("fvs median examples") {
  const auto p = P({2, 7, 1, 6, 3, 5, 4});
  CHECK(ulamFvsMedian(Instance({p, p, p, p, p})) == p);
  auto rng = makeRng(8, "fvs-four");
  for (int t = 0; t < 30; ++t) {
    const auto q = randomPermutation(7, rng);
    CHECK(ulamFvsMedian(Instance({p, q, p, p, p})) == p);
  }
}

TEST_CASE("triangle removal stays within three times the minimum vertex set") {
  auto rng = makeRng(9, "fvs-ratio");
  for (int t = 0; t < 60; ++t) {
    const auto Q = generateUniform(7, 5, 70 + t);
    const auto g = majorityTournament(Q);
    std::vector<double> wv(7);
    for (auto& x : wv) x = 1.0 + static_cast<double>(uniformBelow(rng, 4));
    const bool weighted = t % 2 == 1;
    std::vector<bool> alive(7, true);
    const auto removed = removeTriangles(g, alive, weighted ? std::span<const double>(wv) : std::span<const double>{});
    double weight = 0.0;
    for (auto v : removed) weight += weighted ? wv[v] : 1.0;
    const auto best = oracles::exactFeedbackVertexSet(g, weighted ? wv : std::vector<double>{});
    CHECK(weight <= 3 * best.weight + 1e-9);
    const auto out = ulamFvsMedian(Q);
    CHECK(out.size() == 7);
  }
}
