#include "doctest.h"
#include "rankagg/io.hpp"
#include "rankagg/local_solvers.hpp"
#include "rankagg/mpc/lanes.hpp"
#include "rankagg/mpc_algorithms.hpp"

using namespace rankagg;
using namespace rankagg::mpc;

namespace {

MpcConfig config(std::size_t n, double kappa = 1.0) {
  MpcConfig cfg;
  cfg.n = n;
  cfg.epsilon = 0.5;
  cfg.kappa = kappa;
  return cfg;
}

WeightVector randomWeights(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (auto& x : w) x = u(rng);
  return WeightVector(std::move(w));
}

const Metric kAll[] = {Metric::Hamming, Metric::WeightedHamming, Metric::Footrule,
                       Metric::Kendall, Metric::WeightedKendall, Metric::Ulam,
                       Metric::WeightedUlam};

}  // namespace

TEST_CASE("mpc distances match offline") {
  for (std::size_t n : {16u, 64u}) {
    auto rng = makeRng(11, "mpc-dist", n);
    const auto cfg = config(n);
    for (int rep = 0; rep < 10; ++rep) {
      const auto p = randomPermutation(n, rng);
      const auto q = rep == 0 ? p : randomPermutation(n, rng);
      const auto w = randomWeights(n, rng);
      for (auto metric : kAll) {
        CAPTURE(toString(metric));
        const auto got = mpcDistance(metric, p, q, cfg, &w);
        const auto want = distance(metric, p, q, &w);
        if (isWeighted(metric)) {
          CHECK(got.value == doctest::Approx(want).epsilon(1e-9));
        } else {
          CHECK(got.value == want);
        }
        CHECK_FALSE(got.trace.failed);
      }
    }
  }
}

TEST_CASE("kendall distance machine count") {
  const auto cfg = config(64);
  IdSpace ids;
  DistanceLane lane(Metric::Kendall, cfg, ids);
  // 8 block machines, 8x8 pair machines, one reduce node over the pairs.
  CHECK(lane.end() - lane.begin() == 73);
  auto rng = makeRng(3, "kendall-count");
  const auto r = mpcDistance(Metric::Kendall, randomPermutation(64, rng), randomPermutation(64, rng), cfg);
  CHECK(r.trace.machinesUsed <= 73);
}

TEST_CASE("mpc distance rounds do not depend on n") {
  for (auto metric : kAll) {
    CAPTURE(toString(metric));
    std::size_t rounds = 0;
    for (std::size_t n : {16u, 64u, 256u}) {
      auto rng = makeRng(5, "rounds", n);
      const auto w = randomWeights(n, rng);
      const auto r = mpcDistance(metric, randomPermutation(n, rng), randomPermutation(n, rng), config(n), &w);
      if (rounds == 0) rounds = r.trace.rounds;
      CHECK(r.trace.rounds == rounds);
    }
  }
}

TEST_CASE("mpc medians match offline") {
  for (int run = 0; run < 200; ++run) {
    const std::size_t n = run % 2 ? 16 : 64;
    const auto Q = run % 3 ? generateUniform(n, 3, 100 + run) : generatePlanted(n, 3, 4, 100 + run).instance;
    const auto cfg = config(n);
    CHECK(mpcHammingMedian(Q, cfg).output == hammingMajorityMedian(Q));
    CHECK(mpcFootruleMedian(Q, cfg).output == footruleMedian(Q));
    if (run < 60) CHECK(mpcKendallMedian(Q, cfg, run).output == kendallKwikSortMedian(Q, run));
  }
}

TEST_CASE("mpc median rounds do not depend on n") {
  std::size_t h = 0, f = 0, k = 0;
  for (std::size_t n : {16u, 64u, 256u}) {
    const auto Q = generateUniform(n, 3, n);
    const auto cfg = config(n);
    const auto a = mpcHammingMedian(Q, cfg).trace.rounds;
    const auto b = mpcFootruleMedian(Q, cfg).trace.rounds;
    const auto c = mpcKendallMedian(Q, cfg, 9).trace.rounds;
    if (h == 0) h = a, f = b, k = c;
    CHECK(a == h);
    CHECK(b == f);
    CHECK(c == k);
  }
}

TEST_CASE("median lanes reject the wrong group size") {
  const auto Q = generateUniform(16, 4, 1);
  CHECK_THROWS_AS(mpcHammingMedian(Q, config(16)), InvalidInput);
  CHECK_THROWS_AS(mpcUlamReconstruct(generateUniform(16, 3, 1), {}, config(16, kRelaxedKappa)),
                  InvalidInput);
}

TEST_CASE("mpc ulam reconstruction matches offline") {
  for (int run = 0; run < 50; ++run) {
    CAPTURE(run);
    const std::size_t n = 16;
    const auto Q = run % 2 ? generateUniform(n, 5, 300 + run) : generatePlanted(n, 5, 3, 300 + run).instance;
    ReconstructParams params;
    const auto want = scalableMedianReconstruct(Q, params);
    const auto got = mpcUlamReconstruct(Q, params, config(n, kRelaxedKappa));
    CHECK(got.output == want.output);
    CHECK(got.blockEd == want.composition.blockEd);
    CHECK(got.tuplesPerBlock == want.tuplesPerBlock);
  }
  // Five copies of one permutation reconstruct it.
  const auto p = generateUniform(16, 1, 7).perms[0];
  const Instance same({p, p, p, p, p});
  CHECK(mpcUlamReconstruct(same, {}, config(16, kRelaxedKappa)).output == p);
}

TEST_CASE("mpc ulam reconstruction rounds do not depend on n") {
  std::size_t rounds = 0;
  for (std::size_t n : {16u, 64u}) {
    const auto got = mpcUlamReconstruct(generatePlanted(n, 5, 3, n).instance, {}, config(n, kRelaxedKappa));
    if (rounds == 0) rounds = got.trace.rounds;
    CHECK(got.trace.rounds == rounds);
  }
}

TEST_CASE("mpc aggregate matches offline aggregate") {
  for (int run = 0; run < 20; ++run) {
    CAPTURE(run);
    const auto P = generatePlanted(16, 12, 3, 500 + run).instance;
    FrameworkConfig fcfg;
    fcfg.seed = 900 + run;
    const auto want = aggregate(P, Metric::Hamming, fcfg, mpcLocalSolver(Metric::Hamming));
    const auto got = mpcAggregate(P, Metric::Hamming, config(16), fcfg);
    CHECK(got.result.median == want.median);
    CHECK(got.result.estimatedCost == want.estimatedCost);
    CHECK(got.result.exactCost == want.exactCost);
    CHECK(got.result.candidateCount == want.candidateCount);
    CHECK(got.result.provenance.indices == want.provenance.indices);
  }
}

TEST_CASE("mpc aggregate on other metrics") {
  for (auto metric : {Metric::Footrule, Metric::Kendall, Metric::WeightedHamming}) {
    CAPTURE(toString(metric));
    auto P = generatePlanted(16, 8, 3, 77).instance;
    auto rng = makeRng(1, "agg-w");
    P.weights = randomWeights(16, rng);
    FrameworkConfig fcfg;
    fcfg.seed = 4;
    const auto want = aggregate(P, metric, fcfg, mpcLocalSolver(metric));
    const auto got = mpcAggregate(P, metric, config(16), fcfg);
    CHECK(got.result.median == want.median);
    CHECK(*got.result.exactCost == doctest::Approx(*want.exactCost).epsilon(1e-9));
  }
}

TEST_CASE("mpc aggregate rounds do not depend on n") {
  // m = 8 keeps the candidate count small enough for a one-level gather at n = 16.
  std::size_t rounds = 0;
  for (std::size_t n : {16u, 64u, 256u}) {
    const auto P = generateUniform(n, 8, n);
    FrameworkConfig fcfg;
    fcfg.seed = 3;
    const auto got = mpcAggregate(P, Metric::Hamming, config(n), fcfg);
    if (rounds == 0) rounds = got.trace.rounds;
    CHECK(got.trace.rounds == rounds);
  }
}

TEST_CASE("mpc aggregate validates its input") {
  const auto P = generateUniform(16, 2, 1);
  CHECK_THROWS_AS(mpcAggregate(P, Metric::Hamming, config(16), FrameworkConfig{}), InvalidInput);
  const auto Q = generateUniform(16, 6, 1);
  CHECK_THROWS_AS(mpcAggregate(Q, Metric::WeightedHamming, config(16), FrameworkConfig{}), InvalidInput);
}

TEST_CASE("mpc aggregate with the ulam reconstruction solver") {
  const auto P = generatePlanted(16, 8, 3, 1).instance;
  FrameworkConfig fcfg;
  fcfg.seed = 1;
  fcfg.r = 5;
  const auto want = aggregate(P, Metric::Ulam, fcfg, mpcLocalSolver(Metric::Ulam));
  const auto got = mpcAggregate(P, Metric::Ulam, config(16, kRelaxedKappa), fcfg);
  CHECK(got.result.median == want.median);
  CHECK(got.result.exactCost == want.exactCost);
}
