#include <random>

#include "doctest.h"
#include "rankagg/distance.hpp"
#include "rankagg/io.hpp"
#include "rankagg/oracles.hpp"

using namespace rankagg;

namespace {
Permutation P(std::initializer_list<Element> v) { return Permutation(std::vector<Element>(v)); }
}  // namespace

TEST_CASE("permutation validation") {
  CHECK_THROWS_AS(P({1, 1, 2}), InvalidInput);
  CHECK_THROWS_AS(P({0, 1}), InvalidInput);
  CHECK_THROWS_AS(Permutation(std::vector<Element>{}), InvalidInput);
  auto p = P({3, 1, 2});
  CHECK(p.positionOf(3) == 1);
  CHECK(p.at(2) == 1);
  CHECK(p.toString() == "3 1 2");
}

TEST_CASE("hamming examples") {
  CHECK(hamming(P({1, 2, 3}), P({1, 2, 3})) == 0);
  CHECK(hamming(P({1, 2, 3}), P({2, 1, 3})) == 2);
  CHECK(hamming(P({1, 2, 3}), P({2, 1, 3}), WeightVector({1, 2, 3})) == doctest::Approx(3.0));
  CHECK_THROWS_AS(hamming(P({1, 2}), P({1, 2, 3})), InvalidInput);
}

TEST_CASE("footrule examples") {
  CHECK(footrule(P({1, 2, 3}), P({3, 2, 1})) == 4);
  for (std::size_t n = 2; n <= 8; ++n) {
    CHECK(footrule(Permutation::identity(n), Permutation::reversed(n)) ==
          static_cast<std::int64_t>(n * n / 2));
  }
}

TEST_CASE("kendall examples") {
  CHECK(kendall(P({1, 2, 3}), P({3, 2, 1})) == 3);
  CHECK(kendall(P({1, 2}), P({2, 1}), WeightVector({2, 4})) == doctest::Approx(3.0));
  CHECK(kendall(Permutation::identity(9), Permutation::reversed(9)) == 36);
}

TEST_CASE("ulam examples") {
  auto d = ulam(P({1, 2, 3, 4}), P({2, 3, 4, 1}));
  CHECK(d.moves == 1);
  CHECK(d.indel == 2);
  auto w = ulam(P({1, 2, 3}), P({3, 1, 2}), WeightVector({5, 1, 1}));
  CHECK(w.moves == doctest::Approx(1.0));
  CHECK(w.indel == doctest::Approx(2.0));
}

TEST_CASE("cost examples") {
  Instance inst({P({1, 2, 3}), P({3, 2, 1})});
  CHECK(cost(P({1, 2, 3}), inst, Metric::Kendall) == doctest::Approx(1.5));
  Instance copies({P({2, 1, 3}), P({2, 1, 3})});
  CHECK(cost(P({2, 1, 3}), copies, Metric::Ulam) == 0.0);
  CHECK_THROWS_AS(cost(P({1, 2, 3}), inst, Metric::WeightedKendall), InvalidInput);
}

TEST_CASE("fast kernels agree with quadratic definitions") {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto n = 1 + uniformBelow(rng, 40);
    auto p = randomPermutation(n, rng);
    auto q = randomPermutation(n, rng);
    std::vector<double> wv(n);
    for (auto& x : wv) x = static_cast<double>(uniformBelow(rng, 5));
    WeightVector w(wv);
    for (auto m : {Metric::Hamming, Metric::Footrule, Metric::Kendall, Metric::Ulam}) {
      CHECK(distance(m, p, q) == oracles::naiveDistance(m, p, q));
    }
    for (auto m : {Metric::WeightedHamming, Metric::WeightedKendall, Metric::WeightedUlam}) {
      CHECK(distance(m, p, q, &w) == doctest::Approx(oracles::naiveDistance(m, p, q, &w)).epsilon(1e-12));
    }
  }
}

TEST_CASE("instance parsing") {
  auto inst = parseInstance("3 2\n1 2 3\n3 2 1\nw 1 2 0.5\n");
  CHECK(inst.m() == 2);
  REQUIRE(inst.weights);
  CHECK((*inst.weights)[3] == 0.5);
  CHECK(parseInstance(formatInstance(inst)).perms == inst.perms);
  try {
    parseInstance("3 2\n1 2 3\n1 2 2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parseInstance("3 2\n1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parseInstance("3 1\n1 2 x\n"), ParseError);
}
