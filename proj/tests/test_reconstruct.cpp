#include <set>

#include "doctest.h"
#include "rankagg/io.hpp"
#include "rankagg/oracles.hpp"
#include "rankagg/reconstruct.hpp"

using namespace rankagg;

namespace {

std::vector<Element> V(std::initializer_list<Element> v) { return v; }

// Owns the five strings so the spans stay valid.
struct Group {
  std::array<std::vector<Element>, 5> strings;
  std::array<std::span<const Element>, 5> spans() const {
    std::array<std::span<const Element>, 5> out;
    for (std::size_t i = 0; i < 5; ++i) out[i] = strings[i];
    return out;
  }
};

// Straight transcription of the window formula, kept apart from windowGrid.
std::pair<std::set<std::pair<int, int>>, std::set<int>> directWindows(int n, double eps,
                                                                      double rho, int j) {
  const double nEps = std::pow(n, eps);
  const int K0 = static_cast<int>(std::ceil(nEps - 1e-9));
  const int b = (n + K0 - 1) / K0;
  const int l = (j - 1) * b + 1;
  const int bj = std::min(b, n + 1 - l);
  std::set<std::pair<int, int>> W;
  std::set<int> starts;
  int top = static_cast<int>(std::ceil(std::log(2.0 * n) / std::log(1 + rho) - 1e-9));
  for (int t = 0; t <= top; ++t) {
    double d = std::pow(1 + rho, t);
    int g = std::max(1, static_cast<int>(std::floor(rho * d / nEps + 1e-9)));
    for (int s = 1; s <= n + 1; ++s) {
      if (s % g != 0 || s < l - d - 1e-9 || s > l + d + 1e-9) continue;
      starts.insert(s);
      std::vector<int> ends{s + bj};
      for (int a = 0; std::pow(1 + rho, a) <= std::min(bj / rho, d) + 1e-9; ++a) {
        ends.push_back(s + bj + static_cast<int>(std::floor(std::pow(1 + rho, a) + 1e-9)));
      }
      if (bj - rho * bj > 0) {
        int aMax = static_cast<int>(std::ceil(std::log(bj - rho * bj) / std::log(1 + rho) - 1e-9));
        for (int a = 0; a <= aMax; ++a) {
          ends.push_back(s + bj - static_cast<int>(std::floor(std::pow(1 + rho, a) + 1e-9)));
        }
      }
      for (int e : ends) {
        e = std::min(e, n + 1);
        if (e > s) W.insert({s, e});
      }
    }
  }
  return {W, starts};
}

}  // namespace

TEST_CASE("block layout") {
  auto L = blockLayout(16, {});
  CHECK(L.K == 4);
  CHECK(L.b == 4);
  auto L2 = blockLayout(10, {});
  CHECK(L2.b == 3);
  CHECK(L2.K == 4);
  CHECK(L2.length(4) == 1);
  CHECK(L2.K * L2.b >= 10);
}

TEST_CASE("window grid matches direct enumeration") {
  for (int n : {5, 10, 16, 23}) {
    ReconstructParams params;
    auto grid = windowGrid(static_cast<std::size_t>(n), params);
    for (std::size_t j = 1; j <= grid.layout.K; ++j) {
      auto [W, starts] = directWindows(n, params.epsilon, params.rho, static_cast<int>(j));
      const auto& bw = grid.blocks[j - 1];
      std::set<std::pair<int, int>> got;
      for (auto w : bw.W) {
        CHECK(1 <= w.s);
        CHECK(w.s < w.e);
        CHECK(w.e <= n + 1);
        got.insert({w.s, w.e});
      }
      CHECK(got == W);
      CHECK(bw.W.size() == W.size());
      CHECK(bw.SW.size() == starts.size());
      for (auto w : bw.SW) CHECK(w.s == w.e);
    }
  }
}

TEST_CASE("tuple enumeration order and cap") {
  Rng rng(2);
  const std::size_t n = 9;
  auto c = randomPermutation(n, rng);
  Instance Q({c, randomMove(c, rng), c, randomMove(c, rng), randomPermutation(n, rng)});
  auto grid = windowGrid(n, {});
  auto lists = rankWindows(Q, grid, 2, referenceTexts(Q, grid, 2)[0]);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(lists.W[i].size() == grid.blocks[1].W.size());
    CHECK(lists.SW[i].size() == grid.SW.size());
    for (const auto* list : {&lists.W[i], &lists.SW[i]}) {
      for (std::size_t k = 1; k < list->size(); ++k) CHECK((*list)[k - 1].key <= (*list)[k].key);
    }
  }
  auto keyOf = [&](std::size_t i, Window w) {
    for (const auto* list : {&lists.W[i], &lists.SW[i]}) {
      for (const auto& r : *list) {
        if (r.w == w) return r.key;
      }
    }
    FAIL("window not ranked");
    return std::int64_t{-1};
  };
  TupleEnumerator it(lists, 200);
  WindowTuple t;
  std::set<std::array<std::pair<int, int>, 5>> seen;
  std::int64_t last = -1;
  while (it.next(t)) {
    std::array<std::pair<int, int>, 5> key;
    std::int64_t total = 0;
    int degenerate = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      key[i] = {t[i].s, t[i].e};
      total += keyOf(i, t[i]);
      degenerate += t[i].s == t[i].e;
    }
    CHECK(degenerate <= 1);
    CHECK(total >= last);
    last = total;
    CHECK(seen.insert(key).second);
  }
  CHECK(it.produced() == 200);
  CHECK(it.truncated());
}

TEST_CASE("five copies rank the block's own interval first") {
  Rng rng(4);
  auto p = randomPermutation(12, rng);
  Instance Q({p, p, p, p, p});
  auto grid = windowGrid(12, {});
  for (std::size_t j = 1; j <= grid.layout.K; ++j) {
    const auto l = grid.layout.start(j);
    const auto len = grid.layout.length(j);
    TupleEnumerator first(rankWindows(Q, grid, j, referenceTexts(Q, grid, j)[0]), 1);
    WindowTuple t;
    REQUIRE(first.next(t));
    for (auto w : t) CHECK(w == Window{l, l + len});
  }
}

TEST_CASE("tuple enumeration is exhaustive without a cap") {
  ReconstructParams params;
  params.epsilon = 0.3;
  auto grid = windowGrid(3, params);
  REQUIRE(grid.layout.K == 2);
  Instance Q({Permutation::identity(3), Permutation::reversed(3), Permutation::identity(3),
              Permutation(V({2, 3, 1})), Permutation(V({3, 1, 2}))});
  for (std::size_t j = 1; j <= grid.layout.K; ++j) {
    const auto w = grid.blocks[j - 1].W.size();
    const auto sw = grid.SW.size();
    const auto expected = w * w * w * w * w + 5 * w * w * w * w * sw;
    TupleEnumerator it(rankWindows(Q, grid, j, referenceTexts(Q, grid, j)[0]), 1u << 30);
    WindowTuple t;
    std::set<std::array<std::pair<int, int>, 5>> seen;
    while (it.next(t)) {
      std::array<std::pair<int, int>, 5> key;
      for (std::size_t i = 0; i < 5; ++i) key[i] = {t[i].s, t[i].e};
      seen.insert(key);
    }
    CHECK(it.produced() == expected);
    CHECK(seen.size() == expected);
    CHECK_FALSE(it.truncated());
  }
}

TEST_CASE("block reconstruction examples") {
  Group five{{V({1, 2, 3}), V({1, 2, 3}), V({1, 2, 3}), V({1, 2, 3}), V({1, 2, 3})}};
  CHECK(blockReconstruction(five.spans(), 3) == V({1, 2, 3}));
  Group three{{V({1, 2, 3}), V({1, 2, 3}), V({1, 2}), V({1, 2}), V({1, 2, 3})}};
  CHECK(blockReconstruction(three.spans(), 3) == V({1, 2, 0}));
  Group tie{{V({1, 2}), V({1, 2}), V({2, 1}), V({2, 1}), V({})}};
  CHECK(blockReconstruction(tie.spans(), 2) == V({0, 0}));
  // 1>2, 2>3, 3>1 by majority: the whole triangle goes.
  Group cyc{{V({1, 2, 3, 4}), V({2, 3, 1, 4}), V({3, 1, 2, 4}), V({1, 2, 3, 4}),
                    V({2, 3, 1, 4})}};
  CHECK(blockReconstruction(cyc.spans(), 2) == V({4, 0}));
  // Longer than b: no padding.
  CHECK(blockReconstruction(five.spans(), 2) == V({1, 2, 3}));
}

TEST_CASE("postprocess examples") {
  CHECK(postprocess(V({0, 3, 0, 1}), 3) == Permutation(V({3, 2, 1})));
  CHECK(postprocess(V({2, 3, 1}), 3) == Permutation(V({2, 3, 1})));
  CHECK(postprocess(V({0, 0, 0, 0}), 4) == Permutation::identity(4));
  CHECK_THROWS_AS(postprocess(V({1, 1, 0}), 3), std::logic_error);
  CHECK_THROWS_AS(postprocess(V({1, 0}), 3), std::logic_error);
}

TEST_CASE("compose blocks with no candidates") {
  auto L = blockLayout(16, {});
  std::vector<std::vector<CandidateBlock>> C(L.K);
  auto r = composeBlocks(C, L);
  CHECK(r.blockEd == 5 * static_cast<std::int64_t>(L.K * L.b + 16));
  CHECK(r.intermediate == std::vector<Element>(16, kDummy));
  CHECK(r.chosen.empty());
}

TEST_CASE("compose blocks picks the planted tiling") {
  const auto p = Permutation(V({5, 2, 8, 1, 7, 3, 6, 4, 9}));
  Instance Q({p, p, p, p, p});
  auto L = blockLayout(9, {});
  std::vector<std::vector<CandidateBlock>> C(L.K);
  for (std::size_t j = 1; j <= L.K; ++j) {
    WindowTuple w;
    w.fill({L.start(j), L.start(j) + L.length(j)});
    // A decoy shifted by one position first, then the true block.
    WindowTuple decoy = w;
    decoy.fill({L.start(j) + 1, std::min<std::int32_t>(10, L.start(j) + L.length(j) + 1)});
    C[j - 1].push_back(makeCandidate(Q, j, decoy, L.b));
    C[j - 1].push_back(makeCandidate(Q, j, w, L.b));
  }
  auto r = composeBlocks(C, L);
  CHECK(r.blockEd == 0);
  REQUIRE(r.chosen.size() == L.K);
  for (auto c : r.chosen) CHECK(c.index == 1);
  CHECK(postprocess(r.intermediate, 9) == p);
}

TEST_CASE("compose blocks equals exhaustive sequence search") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + uniformBelow(rng, 6);
    ReconstructParams params;
    params.epsilon = n <= 6 ? 0.5 : 0.45;
    auto L = blockLayout(n, params);
    if (L.K > 3) continue;
    std::vector<Permutation> ps;
    for (int i = 0; i < 5; ++i) ps.push_back(randomPermutation(n, rng));
    Instance Q(ps);
    auto grid = windowGrid(n, params);
    std::vector<std::vector<CandidateBlock>> C(L.K);
    for (std::size_t j = 1; j <= L.K; ++j) {
      // Up to 4 random tuples per block.
      const auto count = uniformBelow(rng, 5);
      const auto& W = grid.blocks[j - 1].W;
      for (std::size_t t = 0; t < count; ++t) {
        WindowTuple w;
        for (auto& x : w) x = W[uniformBelow(rng, W.size())];
        C[j - 1].push_back(makeCandidate(Q, j, w, L.b));
      }
    }
    auto r = composeBlocks(C, L);
    CHECK(isValidSequence(C, r.chosen));
    CHECK(blockEdOf(C, r.chosen, L) == r.blockEd);
    CHECK(r.blockEd == oracles::exhaustiveBlockEd(C, L));
  }
}

TEST_CASE("reconstruct five copies") {
  Rng rng(3);
  for (std::size_t n : {1, 2, 5, 9, 16, 20}) {
    auto p = randomPermutation(n, rng);
    Instance Q({p, p, p, p, p});
    auto r = scalableMedianReconstruct(Q, {});
    CHECK(r.output == p);
  }
}

TEST_CASE("reconstruct four copies plus noise") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto n = 4 + uniformBelow(rng, 9);
    auto p = randomPermutation(n, rng);
    Instance Q({p, p, randomPermutation(n, rng), p, p});
    CHECK(scalableMedianReconstruct(Q, {}).output == p);
  }
}

TEST_CASE("reconstruct rejects wrong group size") {
  Instance Q({Permutation::identity(3)});
  CHECK_THROWS_AS(scalableMedianReconstruct(Q, {}), InvalidInput);
}
