#include "rankagg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "rankagg/framework.hpp"
#include "rankagg/io.hpp"
#include "rankagg/local_solvers.hpp"
#include "rankagg/mpc/lanes.hpp"
#include "rankagg/mpc_algorithms.hpp"
#include "rankagg/oracles.hpp"
#include "rankagg/reconstruct.hpp"
#include "rankagg/tournament.hpp"

namespace rankagg::verify {

namespace {

constexpr Metric kMetrics[] = {Metric::Hamming, Metric::WeightedHamming, Metric::Footrule,
                               Metric::Kendall, Metric::WeightedKendall, Metric::Ulam,
                               Metric::WeightedUlam};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Positive integer weights keep every weighted sum exact in doubles.
WeightVector integerWeights(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  for (auto& x : w) x = 1.0 + static_cast<double>(uniformBelow(rng, 9));
  return WeightVector(std::move(w));
}

std::vector<std::size_t> sampleSubset(std::size_t m, std::size_t r, Rng& rng) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < r; ++i) std::swap(idx[i], idx[i + uniformBelow(rng, m - i)]);
  idx.resize(r);
  return idx;
}

Instance randomInstance(std::size_t n, std::size_t m, Rng& rng, bool weighted) {
  std::vector<Permutation> ps;
  for (std::size_t i = 0; i < m; ++i) ps.push_back(randomPermutation(n, rng));
  if (weighted) return Instance(std::move(ps), integerWeights(n, rng));
  return Instance(std::move(ps));
}

class Recorder {
 public:
  void check(std::string name, bool ok, std::string detail = {}) {
    checks_.push_back({std::move(name), ok, std::move(detail)});
  }
  /// Counts failures over a loop and records one check.
  struct Tally {
    std::size_t runs = 0;
    std::size_t failures = 0;
    std::string firstFailure;
    void add(bool ok, const std::string& what = {}) {
      ++runs;
      if (!ok && failures++ == 0) firstFailure = what;
    }
  };
  void tally(std::string name, const Tally& t, std::string extra = {}) {
    std::string detail = std::to_string(t.runs - t.failures) + "/" + std::to_string(t.runs);
    if (!extra.empty()) detail += ", " + extra;
    if (t.failures) detail += "; first failure: " + t.firstFailure;
    check(std::move(name), t.failures == 0 && t.runs > 0, std::move(detail));
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

// Acceptance 1.
void distances(Recorder& rec) {
  auto rng = makeRng(1, "verify-distances");
  for (auto [metric, naiveMetric] : {std::pair{Metric::Kendall, Metric::WeightedKendall},
                                     std::pair{Metric::Ulam, Metric::WeightedUlam}}) {
    Recorder::Tally plain, weighted;
    for (int t = 0; t < 1000; ++t) {
      const auto n = 1 + uniformBelow(rng, 128);
      const auto p = randomPermutation(n, rng), q = randomPermutation(n, rng);
      const auto w = integerWeights(n, rng);
      const double a = distance(metric, p, q), b = oracles::naiveDistance(metric, p, q);
      plain.add(a == b, "n=" + std::to_string(n) + " fast " + fmt(a) + " naive " + fmt(b));
      const double c = distance(naiveMetric, p, q, &w), d = oracles::naiveDistance(naiveMetric, p, q, &w);
      weighted.add(c == d, "n=" + std::to_string(n) + " fast " + fmt(c) + " naive " + fmt(d));
    }
    rec.tally(std::string(toString(metric)) + " equals quadratic oracle", plain);
    rec.tally(std::string(toString(naiveMetric)) + " equals quadratic oracle", weighted);
  }
  for (auto metric : kMetrics) {
    Recorder::Tally t;
    for (int k = 0; k < 1000; ++k) {
      const auto n = 1 + uniformBelow(rng, 64);
      const auto p = randomPermutation(n, rng), q = randomPermutation(n, rng), r = randomPermutation(n, rng);
      const auto w = integerWeights(n, rng);
      const double pq = distance(metric, p, q, &w), qp = distance(metric, q, p, &w);
      const double pr = distance(metric, p, r, &w), qr = distance(metric, q, r, &w);
      const double pp = distance(metric, p, p, &w);
      const bool ok = pq >= 0 && pq == qp && pp == 0 && ((p == q) == (pq == 0)) &&
                      pr <= pq + qr + 1e-9 * std::max(1.0, pr);
      t.add(ok, "n=" + std::to_string(n));
    }
    rec.tally(std::string(toString(metric)) + " metric axioms", t);
  }
}

// Acceptance 2.
void slackIdentity(Recorder& rec) {
  auto rng = makeRng(2, "verify-slack");
  Recorder::Tally identity, nonneg;
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto metric = kMetrics[uniformBelow(rng, 7)];
    const auto n = 1 + uniformBelow(rng, 24);
    const auto q = 2 + uniformBelow(rng, 5);
    std::vector<double> wv(n);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (auto& x : wv) x = u(rng);
    std::vector<Permutation> ps;
    for (std::size_t i = 0; i < q; ++i) ps.push_back(randomPermutation(n, rng));
    const Instance Q(ps, WeightVector(wv));
    const auto x = uniformBelow(rng, 4) == 0 ? ps[0] : randomPermutation(n, rng);
    double pairSlack = 0.0, pairDist = 0.0;
    bool allNonneg = true;
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = i + 1; j < q; ++j) {
        const double s = slack(Q, i, j, x, metric);
        allNonneg = allNonneg && s >= -1e-9;
        pairSlack += s;
        pairDist += distance(metric, ps[i], ps[j], Q.weightsOrNull());
      }
    }
    const double rhs = 2.0 * static_cast<double>(q * (q - 1) / 2) * cost(x, Q, metric) - pairDist;
    const auto report = totalSlack(Q, x, metric);
    const double scale = std::max({1.0, std::abs(rhs), std::abs(pairSlack)});
    const double err = std::max(std::abs(pairSlack - rhs), std::abs(report.total - rhs)) / scale;
    worst = std::max(worst, err);
    identity.add(err <= 1e-9 && report.identityHolds,
                 std::string(toString(metric)) + " residual " + fmt(err));
    nonneg.add(allNonneg, std::string(toString(metric)));
  }
  rec.tally("total slack identity", identity, "worst relative residual " + fmt(worst));
  rec.tally("pairwise slack is nonnegative", nonneg);
}

// Acceptance 3.
void lemmaBounds(Recorder& rec) {
  auto rng = makeRng(3, "verify-lemmas");
  struct Case {
    const char* name;
    Metric metric;
    double factor;
  };
  for (const Case c : {Case{"weighted hamming: d(x*, y) <= slack", Metric::WeightedHamming, 1.0},
                       Case{"footrule: d(x*, y) <= slack", Metric::Footrule, 1.0},
                       Case{"weighted kendall, exact arc set: d(x*, y) <= 3 slack", Metric::WeightedKendall, 3.0}}) {
    Recorder::Tally t;
    double margin = INFINITY;
    for (int trial = 0; trial < 300; ++trial) {
      const auto P = randomInstance(6, 8, rng, isWeighted(c.metric));
      const auto xs = oracles::exactMedian(P, c.metric).median;
      const auto Q = P.subset(sampleSubset(P.m(), 3, rng));
      Permutation y = Permutation::identity(6);
      if (c.metric == Metric::WeightedHamming) {
        y = hammingMajorityMedian(Q);
      } else if (c.metric == Metric::Footrule) {
        y = footruleMedian(Q);
      } else {
        const auto g = majorityTournament(Q);
        std::vector<std::vector<double>> edges(6, std::vector<double>(6, 0.0));
        for (std::size_t a = 0; a < 6; ++a) {
          for (std::size_t b = 0; b < 6; ++b) {
            if (g.hasEdge(a, b)) edges[a][b] = ((*P.weights)[Element(a + 1)] + (*P.weights)[Element(b + 1)]) / 2;
          }
        }
        std::vector<Element> order;
        for (auto v : oracles::exactFeedbackArcSet(edges).order) order.push_back(static_cast<Element>(v + 1));
        y = Permutation(std::move(order));
      }
      const double lhs = distance(c.metric, xs, y, P.weightsOrNull());
      const double rhs = c.factor * totalSlack(Q, xs, c.metric).total;
      margin = std::min(margin, rhs - lhs);
      t.add(lhs <= rhs + 1e-9, "lhs " + fmt(lhs) + " bound " + fmt(rhs));
    }
    rec.tally(c.name, t, "smallest margin " + fmt(margin));
  }
  Recorder::Tally t;
  double margin = INFINITY;
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = 1 + uniformBelow(rng, 10);
    const auto Q = randomInstance(n, 5, rng, true);
    // Points near Q as well as arbitrary ones, so the bound is not always loose.
    auto pick = [&]() {
      if (uniformBelow(rng, 2) == 0) return randomPermutation(n, rng);
      return n > 1 ? randomMove(Q.perms[uniformBelow(rng, 5)], rng) : Q.perms[0];
    };
    const auto x = pick(), y = pick();
    const double lhs = distance(Metric::WeightedUlam, x, y, Q.weightsOrNull());
    const double rhs = totalSlack(Q, x, Metric::WeightedUlam).total + totalSlack(Q, y, Metric::WeightedUlam).total;
    margin = std::min(margin, rhs - lhs);
    t.add(lhs <= rhs + 1e-9, "lhs " + fmt(lhs) + " bound " + fmt(rhs));
  }
  rec.tally("weighted ulam: indel(x, y) <= slack(x) + slack(y)", t, "smallest margin " + fmt(margin));
}

// Acceptance 4.
void ratios(Recorder& rec) {
  struct Case {
    Metric metric;
    double meanBound;
  };
  for (const Case c : {Case{Metric::Hamming, 1.75 + 0.15}, Case{Metric::Footrule, 1.75 + 0.15},
                       Case{Metric::Kendall, 1.9 + 0.15}, Case{Metric::Ulam, 1.97 + 0.15}}) {
    const auto solver = defaultSolver(c.metric);
    double sum = 0.0, worst = 0.0;
    Recorder::Tally every, optBelow;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto P = generateUniform(6, 10, 10'000 + seed);
      FrameworkConfig cfg;
      cfg.r = solver.r;
      cfg.seed = seed;
      cfg.fullEvaluation = true;
      const auto res = aggregate(P, c.metric, cfg, solver);
      const double opt = oracles::exactMedian(P, c.metric).cost;
      const double ratio = opt > 0 ? *res.exactCost / opt : 1.0;
      sum += ratio;
      worst = std::max(worst, ratio);
      every.add(ratio <= 2.0 + 1e-9, "seed " + std::to_string(seed) + " ratio " + fmt(ratio));
      optBelow.add(opt <= *res.exactCost + 1e-9, "seed " + std::to_string(seed));
    }
    const double mean = sum / 100;
    const std::string name(toString(c.metric));
    rec.tally(name + ": ratio <= 2 on every seed", every, "worst " + fmt(worst));
    rec.check(name + ": mean ratio <= " + fmt(c.meanBound), mean <= c.meanBound, "mean " + fmt(mean));
    rec.tally(name + ": oracle optimum below the output", optBelow);
  }
}

// Acceptance 5.
void reconstruct(Recorder& rec) {
  auto rng = makeRng(5, "verify-reconstruct");
  Recorder::Tally copies;
  for (std::size_t n : {1u, 2u, 5u, 9u, 16u, 20u, 33u}) {
    const auto p = randomPermutation(n, rng);
    copies.add(scalableMedianReconstruct(Instance({p, p, p, p, p}), {}).output == p, "n=" + std::to_string(n));
  }
  rec.tally("five copies return the copy", copies);

  std::size_t recovered = 0;
  std::string missed;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto n = 8 + seed % 9;
    const auto planted = generatePlanted(n, 5, seed % 2, seed);
    if (scalableMedianReconstruct(planted.instance, {}).output == planted.center) {
      ++recovered;
    } else if (missed.size() < 60) {
      missed += (missed.empty() ? "" : ",") + std::to_string(seed);
    }
  }
  rec.check("planted center recovered on >= 95 of 100 seeds", recovered >= 95,
            std::to_string(recovered) + "/100 recovered; missed seeds " + missed);

  Recorder::Tally dp;
  for (int trial = 0; dp.runs < 60; ++trial) {
    const std::size_t n = 4 + uniformBelow(rng, 6);
    ReconstructParams params;
    params.epsilon = n <= 6 ? 0.5 : 0.45;
    const auto L = blockLayout(n, params);
    if (L.K > 3) continue;
    const auto Q = randomInstance(n, 5, rng, false);
    const auto grid = windowGrid(n, params);
    std::vector<std::vector<CandidateBlock>> C(L.K);
    for (std::size_t j = 1; j <= L.K; ++j) {
      const auto count = uniformBelow(rng, 5);
      const auto& W = grid.blocks[j - 1].W;
      for (std::size_t t = 0; t < count; ++t) {
        WindowTuple w;
        for (auto& x : w) x = W[uniformBelow(rng, W.size())];
        C[j - 1].push_back(makeCandidate(Q, j, w, L.b));
      }
    }
    const auto got = composeBlocks(C, L).blockEd;
    const auto want = oracles::exhaustiveBlockEd(C, L);
    dp.add(got == want, "trial " + std::to_string(trial) + " dp " + std::to_string(got) + " exhaustive " +
                            std::to_string(want));
  }
  rec.tally("block composition equals exhaustive search (K <= 3)", dp);
}

mpc::MpcConfig mpcConfig(std::size_t n, double kappa = 1.0) {
  mpc::MpcConfig cfg;
  cfg.n = n;
  cfg.epsilon = 0.5;
  cfg.kappa = kappa;
  return cfg;
}

// Acceptance 6.
void mpcFidelity(Recorder& rec) {
  auto rng = makeRng(6, "verify-mpc");
  auto group = [&](int run, std::size_t m) {
    const std::size_t n = run % 2 ? 64 : 16;
    return run % 3 ? generateUniform(n, m, 60'000 + run) : generatePlanted(n, m, 3, 60'000 + run).instance;
  };
  auto guarded = [](Recorder::Tally& t, const std::string& what, const std::function<bool()>& f) {
    try {
      t.add(f(), what);
    } catch (const mpc::CapViolation& e) {
      t.add(false, what + ": " + e.what());
    }
  };
  Recorder::Tally ham, foot, kend, rc;
  for (int run = 0; run < 200; ++run) {
    const auto Q = group(run, 3);
    const auto cfg = mpcConfig(Q.n);
    const auto what = "run " + std::to_string(run);
    guarded(ham, what, [&] { return mpc::mpcHammingMedian(Q, cfg).output == hammingMajorityMedian(Q); });
    guarded(foot, what, [&] { return mpc::mpcFootruleMedian(Q, cfg).output == footruleMedian(Q); });
    if (run < 60) {
      guarded(kend, what, [&] { return mpc::mpcKendallMedian(Q, cfg, run).output == kendallKwikSortMedian(Q, run); });
    }
  }
  for (int run = 0; run < 50; ++run) {
    const auto Q = group(run, 5);
    guarded(rc, "run " + std::to_string(run), [&] {
      return mpc::mpcUlamReconstruct(Q, {}, mpcConfig(Q.n, mpc::kRelaxedKappa)).output ==
             scalableMedianReconstruct(Q, {}).output;
    });
  }
  rec.tally("mpc hamming median equals offline", ham);
  rec.tally("mpc footrule median equals offline", foot);
  rec.tally("mpc kendall median equals offline", kend);
  rec.tally("mpc ulam reconstruction equals offline", rc);
  for (auto metric : kMetrics) {
    Recorder::Tally t;
    for (int k = 0; k < 500; ++k) {
      const std::size_t n = k % 2 ? 64 : 16;
      const auto p = randomPermutation(n, rng), q = randomPermutation(n, rng);
      const auto w = integerWeights(n, rng);
      guarded(t, "pair " + std::to_string(k), [&] {
        return mpc::mpcDistance(metric, p, q, mpcConfig(n), &w).value == distance(metric, p, q, &w);
      });
    }
    rec.tally("mpc " + std::string(toString(metric)) + " distance equals perm-core", t);
  }
}

// Acceptance 7.
void mpcResources(Recorder& rec) {
  const std::size_t sizes[] = {16, 64, 256};
  Recorder::Tally fits;
  auto note = [&](const std::string& what, const mpc::MpcTrace& tr) {
    fits.add(!tr.failed && tr.peakWordsPerMachine <= tr.wordCap,
             what + " peak " + std::to_string(tr.peakWordsPerMachine) + " cap " + std::to_string(tr.wordCap));
    return tr.rounds;
  };
  auto constant = [&](const std::string& name, const std::function<std::size_t(std::size_t)>& run) {
    std::vector<std::size_t> rounds;
    std::string detail;
    try {
      for (auto n : sizes) {
        rounds.push_back(run(n));
        detail += (detail.empty() ? "rounds " : ", ") + std::to_string(rounds.back());
      }
    } catch (const mpc::CapViolation& e) {
      fits.add(false, name + ": " + e.what());
      rec.check(name + " rounds constant in n", false, e.what());
      return;
    }
    rec.check(name + " rounds constant in n",
              std::all_of(rounds.begin(), rounds.end(), [&](auto r) { return r == rounds[0]; }), detail);
  };
  for (auto metric : kMetrics) {
    const std::string name = "distance " + std::string(toString(metric));
    constant(name, [&](std::size_t n) {
      auto rng = makeRng(7, "verify-resources", n);
      const auto w = integerWeights(n, rng);
      return note(name, mpc::mpcDistance(metric, randomPermutation(n, rng), randomPermutation(n, rng),
                                         mpcConfig(n), &w).trace);
    });
  }
  constant("hamming median", [&](std::size_t n) {
    return note("hamming median", mpc::mpcHammingMedian(generateUniform(n, 3, n), mpcConfig(n)).trace);
  });
  constant("footrule median", [&](std::size_t n) {
    return note("footrule median", mpc::mpcFootruleMedian(generateUniform(n, 3, n), mpcConfig(n)).trace);
  });
  constant("kendall median", [&](std::size_t n) {
    return note("kendall median", mpc::mpcKendallMedian(generateUniform(n, 3, n), mpcConfig(n), 5).trace);
  });
  constant("ulam reconstruction", [&](std::size_t n) {
    return note("ulam reconstruction",
                mpc::mpcUlamReconstruct(generatePlanted(n, 5, 3, n).instance, {}, mpcConfig(n, mpc::kRelaxedKappa)).trace);
  });
  for (auto metric : {Metric::Hamming, Metric::Footrule, Metric::Kendall}) {
    const std::string name = "aggregate " + std::string(toString(metric)) + " (m=8)";
    constant(name, [&](std::size_t n) {
      FrameworkConfig fcfg;
      fcfg.seed = 11;
      return note(name, mpc::mpcAggregate(generatePlanted(n, 8, 3, n).instance, metric, mpcConfig(n), fcfg).trace);
    });
  }
  rec.tally("no machine exceeded the cap", fits);

  Recorder::Tally layout;
  for (auto n : sizes) {
    const auto cfg = mpcConfig(n);
    const auto K = cfg.blockCount();
    // K block machines, K^2 pair machines, and a reduce tree over the pairs.
    const auto fanIn = std::max<std::size_t>(2, cfg.wordCap() / 2);
    std::size_t tree = 0, width = K * K;
    do {
      width = (width + fanIn - 1) / fanIn;
      tree += width;
    } while (width > 1);
    const auto expected = K + K * K + tree;
    auto rng = makeRng(8, "kendall-layout", n);
    const auto tr = mpc::mpcDistance(Metric::Kendall, randomPermutation(n, rng), randomPermutation(n, rng), cfg).trace;
    layout.add(tr.machinesUsed == expected, "n=" + std::to_string(n) + " used " + std::to_string(tr.machinesUsed) +
                                                " formula " + std::to_string(expected));
  }
  rec.tally("kendall distance machines = K + K^2 + reduce tree", layout);
}

// Acceptance 8.
void sampling(Recorder& rec) {
  auto rng = makeRng(8, "verify-sampling");
  const std::size_t r = 3;
  for (int inst = 0; inst < 5; ++inst) {
    const auto P = randomInstance(6, 40, rng, false);
    const auto med = oracles::exactMedian(P, Metric::Kendall);
    const double opt = med.cost;
    // Smallest alpha + 2 delta over the (alpha, delta) pairs P satisfies.
    std::vector<double> costs;
    for (const auto& p : P.perms) costs.push_back(cost(p, P, Metric::Kendall));
    std::vector<double> alphas{0.0};
    for (double c : costs) {
      const double a = 2.0 - c / opt + 1e-12;
      if (a > 0.0 && a <= 1.0) alphas.push_back(a);
    }
    double best = INFINITY, bestA = 0, bestD = 0;
    for (double a : alphas) {
      const auto good = std::count_if(costs.begin(), costs.end(), [&](double c) { return c <= (2.0 - a) * opt; });
      const double d = static_cast<double>(good) / static_cast<double>(P.m());
      if (d > 1.0 - a) continue;
      if (a + 2 * d < best) best = a + 2 * d, bestA = a, bestD = d;
    }
    double sum = 0.0, sumSq = 0.0;
    const int draws = 500;
    for (int k = 0; k < draws; ++k) {
      const double s = totalSlack(P.subset(sampleSubset(P.m(), r, rng)), med.median, Metric::Kendall).total;
      sum += s;
      sumSq += s * s;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt(std::max(0.0, sumSq / draws - mean * mean));
    const double bound = 3.0 * best * opt + 3.0 * sd / std::sqrt(static_cast<double>(draws));
    rec.check("instance " + std::to_string(inst) + ": mean slack <= C(r,2)(alpha+2delta)OPT",
              std::isfinite(best) && mean <= bound,
              "mean " + fmt(mean) + " bound " + fmt(bound) + " (alpha " + fmt(bestA) + ", delta " + fmt(bestD) +
                  ", OPT " + fmt(opt) + ")");
  }
}

struct SuiteDef {
  const char* name;
  const char* title;
  double budgetSeconds;
  void (*run)(Recorder&);
};

const SuiteDef kSuites[] = {
    {"distances", "distance kernels equal the quadratic oracles; metric axioms", 10, distances},
    {"slack-identity", "total slack identity", 60, slackIdentity},
    {"lemma-bounds", "local solution proximity bounds against exact medians", 120, lemmaBounds},
    {"ratios", "end-to-end approximation ratios in full-evaluation mode", 300, ratios},
    {"reconstruct", "windowed Ulam reconstruction sanity", 180, reconstruct},
    {"mpc-fidelity", "MPC outputs equal the offline outputs", 180, mpcFidelity},
    {"mpc-resources", "MPC caps, round counts and machine layout", 300, mpcResources},
    {"sampling-lemma", "expected slack of a random subset", 120, sampling},
};

}  // namespace

bool SuiteReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string SuiteReport::summary() const {
  const auto ok = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  std::string s = std::to_string(ok) + "/" + std::to_string(checks.size()) + " checks passed";
  for (const auto& c : checks) {
    if (!c.passed) {
      s += "; failed: " + c.name + " (" + c.detail + ")";
      break;
    }
  }
  return s;
}

const std::vector<std::string>& suiteNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : kSuites) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

SuiteReport runSuite(std::string_view name) {
  for (const auto& s : kSuites) {
    if (name != s.name) continue;
    Recorder rec;
    const auto start = std::chrono::steady_clock::now();
    s.run(rec);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.check("runtime under " + fmt(s.budgetSeconds) + " s", seconds < s.budgetSeconds, fmt(seconds) + " s");
    return {s.name, s.title, rec.take(), seconds};
  }
  std::string known;
  for (const auto& n : suiteNames()) known += (known.empty() ? "" : ", ") + n;
  throw InvalidInput("unknown suite '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace rankagg::verify
