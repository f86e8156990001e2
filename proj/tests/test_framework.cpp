#include <cmath>

#include "doctest.h"
#include "rankagg/framework.hpp"
#include "rankagg/io.hpp"
#include "rankagg/local_solvers.hpp"
#include "rankagg/oracles.hpp"

using namespace rankagg;

namespace {
Permutation P(std::initializer_list<Element> v) { return Permutation(std::vector<Element>(v)); }
}  // namespace

TEST_CASE("slack examples") {
  const Instance Q({P({1, 2, 3}), P({3, 2, 1})});
  CHECK(slack(Q, 0, 1, P({1, 2, 3}), Metric::Kendall) == 0);
  CHECK(slack(Q, 0, 1, P({2, 1, 3}), Metric::Kendall) == 0);
  CHECK(slack(Q, 0, 1, P({1, 3, 2}), Metric::Kendall) == 0);
  CHECK(slack(Q, 0, 1, P({2, 3, 1}), Metric::Kendall) == 0);
  CHECK_THROWS_AS(slack(Q, 0, 0, P({1, 2, 3}), Metric::Kendall), InvalidInput);
  CHECK_THROWS_AS(slack(Q, 0, 2, P({1, 2, 3}), Metric::Kendall), InvalidInput);
}

TEST_CASE("total slack") {
  const auto p = P({2, 4, 1, 3});
  CHECK(totalSlack(Instance({p}), p, Metric::Kendall).total == 0);
  CHECK(totalSlack(Instance({p}), p, Metric::Kendall).pairwise.empty());
  CHECK(totalSlack(Instance({p, p, p}), p, Metric::Ulam).total == 0);
  for (int t = 0; t < 50; ++t) {
    const auto Q = generateUniform(6, 3, 10 + t);
    const auto x = generateUniform(6, 1, 500 + t).perms[0];
    const auto r = totalSlack(Q, x, Metric::Kendall);
    double brute = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        brute += oracles::naiveDistance(Metric::Kendall, x, Q.perms[i]) +
                 oracles::naiveDistance(Metric::Kendall, x, Q.perms[j]) -
                 oracles::naiveDistance(Metric::Kendall, Q.perms[i], Q.perms[j]);
      }
    }
    CHECK(r.total == brute);
    CHECK(r.identityHolds);
  }
}

TEST_CASE("estimate picks the candidate with the lowest sampled cost") {
  const auto p = P({1, 2, 3, 4, 5});
  std::vector<Permutation> members(20, p);
  members.push_back(P({5, 4, 3, 2, 1}));
  const Instance inst(members);
  FrameworkConfig cfg;
  cfg.seed = 3;
  const auto one = estimateBestCandidate({P({2, 1, 3, 4, 5})}, inst, Metric::Kendall, cfg.resolved(5, 21));
  CHECK(one.index == 0);
  cfg.fullEvaluation = true;
  const std::vector<Permutation> C{P({2, 1, 3, 4, 5}), p, P({5, 4, 3, 2, 1})};
  const auto e = estimateBestCandidate(C, inst, Metric::Kendall, cfg.resolved(5, 21));
  CHECK(e.index == 1);
  CHECK(e.estimatedCost == doctest::Approx(cost(p, inst, Metric::Kendall)));
  // Ties go to the earlier candidate.
  const auto tie = estimateBestCandidate({p, p}, inst, Metric::Kendall, cfg.resolved(5, 21));
  CHECK(tie.index == 0);
}

TEST_CASE("aggregate on copies returns the copy") {
  const auto p = P({3, 1, 4, 2, 5, 6});
  const Instance inst(std::vector<Permutation>(7, p));
  for (auto metric : {Metric::Hamming, Metric::Footrule, Metric::Kendall, Metric::Ulam}) {
    FrameworkConfig cfg;
    cfg.r = defaultSolver(metric).r;
    const auto r = aggregate(inst, metric, cfg, defaultSolver(metric));
    CHECK(r.median == p);
    CHECK(r.estimatedCost == 0);
    CHECK(*r.exactCost == 0);
  }
}

TEST_CASE("aggregate of identity and reverse stays within twice the optimum") {
  // Two copies of each so that m >= r.
  const auto id = Permutation::identity(5), rev = Permutation::reversed(5);
  const Instance inst({id, rev, id, rev});
  FrameworkConfig cfg;
  cfg.fullEvaluation = true;
  const auto opt = oracles::exactMedian(inst, Metric::Kendall).cost;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const auto r = aggregate(inst, Metric::Kendall, cfg, defaultSolver(Metric::Kendall));
    CHECK(*r.exactCost <= 2 * opt + 1e-9);
  }
}

TEST_CASE("hamming aggregate ratio on small instances") {
  int good = 0;
  for (int t = 0; t < 200; ++t) {
    const auto inst = generateUniform(6, 10, 2000 + t);
    FrameworkConfig cfg;
    cfg.seed = t;
    const auto r = aggregate(inst, Metric::Hamming, cfg, defaultSolver(Metric::Hamming));
    const auto opt = oracles::exactMedian(inst, Metric::Hamming).cost;
    good += *r.exactCost <= 1.75 * opt + 1e-9;
  }
  CHECK(good >= 190);
}

TEST_CASE("aggregate is deterministic and validates input") {
  const auto inst = generateUniform(8, 9, 4);
  FrameworkConfig cfg;
  cfg.seed = 77;
  const auto a = aggregate(inst, Metric::Kendall, cfg, defaultSolver(Metric::Kendall));
  const auto b = aggregate(inst, Metric::Kendall, cfg, defaultSolver(Metric::Kendall));
  CHECK(a.median == b.median);
  CHECK(a.estimatedCost == b.estimatedCost);
  CHECK(a.provenance.indices == b.provenance.indices);
  CHECK_THROWS_AS(aggregate(generateUniform(8, 2, 1), Metric::Kendall, cfg, defaultSolver(Metric::Kendall)),
                  InvalidInput);
  CHECK_THROWS_AS(aggregate(inst, Metric::Ulam, cfg, defaultSolver(Metric::Ulam)), InvalidInput);
  CHECK_THROWS_AS(aggregate(inst, Metric::WeightedKendall, cfg, defaultSolver(Metric::WeightedKendall)),
                  InvalidInput);
}
