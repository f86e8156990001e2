#include "rankagg/framework.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankagg/local_solvers.hpp"
#include "rankagg/rng.hpp"

namespace rankagg {

double slack(const Instance& P, std::size_t i, std::size_t j, const Permutation& x, Metric metric) {
  if (i >= P.m() || j >= P.m()) throw InvalidInput("slack: member index out of range");
  if (i == j) throw InvalidInput("slack: indices must differ");
  const auto* w = P.weightsOrNull();
  return distance(metric, x, P.perms[i], w) + distance(metric, x, P.perms[j], w) -
         distance(metric, P.perms[i], P.perms[j], w);
}

SlackReport totalSlack(const Instance& Q, const Permutation& x, Metric metric) {
  SlackReport report;
  const auto q = Q.m();
  if (q < 2) return report;
  const auto* w = Q.weightsOrNull();
  std::vector<double> toX(q);
  for (std::size_t i = 0; i < q; ++i) toX[i] = distance(metric, x, Q.perms[i], w);
  double pairSum = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = i + 1; j < q; ++j) {
      const double d = distance(metric, Q.perms[i], Q.perms[j], w);
      const double s = toX[i] + toX[j] - d;
      report.pairwise[{i, j}] = s;
      report.total += s;
      pairSum += d;
    }
  }
  const double pairs = static_cast<double>(q) * static_cast<double>(q - 1) / 2.0;
  const double viaCost = 2.0 * pairs * cost(x, Q, metric) - pairSum;
  report.identityResidual = report.total - viaCost;
  const double scale = std::max({1.0, std::abs(report.total), std::abs(pairSum)});
  report.identityHolds = std::abs(report.identityResidual) <= kSlackTolerance * scale;
  return report;
}

FrameworkConfig FrameworkConfig::resolved(std::size_t n, std::size_t m) const {
  if (r < 2) throw InvalidInput("framework: r must be at least 2");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("framework: delta must lie in (0,1)");
  FrameworkConfig c = *this;
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  auto fill = [&](std::size_t& field, double value) {
    if (field == 0) field = static_cast<std::size_t>(std::ceil(value));
    field = std::clamp<std::size_t>(field, 1, m);
  };
  fill(c.candidateSamples, sampleConstant * lg / delta);
  fill(c.subsetSamples, sampleConstant * lg / delta);
  fill(c.evalSamples, evalConstant * lg / (delta * delta));
  if (c.fullEvaluation) c.evalSamples = m;
  return c;
}

LocalSolver defaultSolver(Metric metric) {
  switch (metric) {
    case Metric::Hamming:
    case Metric::WeightedHamming:
      return {3, "hamming-majority", [](const Instance& Q, std::uint64_t) { return hammingMajorityMedian(Q); }};
    case Metric::Footrule:
      return {3, "footrule-median", [](const Instance& Q, std::uint64_t) { return footruleMedian(Q); }};
    case Metric::Kendall:
    case Metric::WeightedKendall:
      return {3, "kwik-sort", [](const Instance& Q, std::uint64_t s) { return kendallKwikSortMedian(Q, s); }};
    case Metric::Ulam:
    case Metric::WeightedUlam:
      return {5, "ulam-fvs", [](const Instance& Q, std::uint64_t) { return ulamFvsMedian(Q); }};
  }
  throw InvalidInput("no default solver for metric");
}

std::vector<std::size_t> drawCandidateIndices(std::size_t m, const FrameworkConfig& cfg) {
  std::vector<std::size_t> out(cfg.candidateSamples);
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto rng = makeRng(cfg.seed, "framework.candidate", k);
    out[k] = uniformBelow(rng, m);
  }
  return out;
}

std::vector<std::vector<std::size_t>> drawSubsets(std::size_t m, const FrameworkConfig& cfg) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(cfg.subsetSamples);
  std::vector<std::size_t> pool(m);
  for (std::size_t t = 0; t < cfg.subsetSamples; ++t) {
    auto rng = makeRng(cfg.seed, "framework.subset", t);
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: the first r slots become the subset.
    for (std::size_t k = 0; k < cfg.r; ++k) {
      std::swap(pool[k], pool[k + uniformBelow(rng, m - k)]);
    }
    out.emplace_back(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cfg.r));
  }
  return out;
}

std::vector<std::size_t> drawEvaluationSet(std::size_t m, const FrameworkConfig& cfg) {
  std::vector<std::size_t> out(cfg.fullEvaluation ? m : cfg.evalSamples);
  if (cfg.fullEvaluation) {
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto rng = makeRng(cfg.seed, "framework.eval", k);
    out[k] = uniformBelow(rng, m);
  }
  return out;
}

std::uint64_t solverSeed(const FrameworkConfig& cfg, std::size_t t) {
  return deriveSeed(cfg.seed, "framework.solver", t);
}

CandidateSet buildCandidates(const Instance& P, const FrameworkConfig& cfg,
                             const LocalSolver& solver) {
  CandidateSet c;
  for (auto idx : drawCandidateIndices(P.m(), cfg)) {
    c.perms.push_back(P.perms[idx]);
    c.provenance.push_back({Provenance::Kind::SampledInput, {idx}});
  }
  c.subsets = drawSubsets(P.m(), cfg);
  for (std::size_t t = 0; t < c.subsets.size(); ++t) {
    const auto Q = P.subset(c.subsets[t]);
    c.perms.push_back(solver.solve(Q, solverSeed(cfg, t)));
    c.provenance.push_back({Provenance::Kind::LocalSolution, c.subsets[t]});
  }
  return c;
}

Estimate estimateBestCandidate(const std::vector<Permutation>& C, const Instance& P,
                               Metric metric, const FrameworkConfig& cfg) {
  if (C.empty()) throw InvalidInput("estimateBestCandidate: empty candidate set");
  const auto c = cfg.resolved(P.n, P.m());
  const auto S = drawEvaluationSet(P.m(), c);
  const auto* w = P.weightsOrNull();
  Estimate best{0, 0.0};
  for (std::size_t k = 0; k < C.size(); ++k) {
    double sum = 0.0;
    for (auto s : S) sum += distance(metric, C[k], P.perms[s], w);
    const double est = sum / static_cast<double>(S.size());
    if (k == 0 || est < best.estimatedCost) best = {k, est};
  }
  return best;
}

void validateAggregation(const Instance& P, Metric metric, const FrameworkConfig& cfg,
                         const LocalSolver& solver) {
  if (solver.r != cfg.r) {
    throw InvalidInput("local solver '" + solver.name + "' needs r=" + std::to_string(solver.r) +
                       " but the framework uses r=" + std::to_string(cfg.r));
  }
  if (P.m() < cfg.r) {
    throw InvalidInput("aggregate needs m >= r (m=" + std::to_string(P.m()) +
                       ", r=" + std::to_string(cfg.r) + ")");
  }
  if (isWeighted(metric) && !P.weights) {
    throw InvalidInput(std::string(toString(metric)) + " requires instance weights");
  }
}

AggregationResult aggregate(const Instance& P, Metric metric, const FrameworkConfig& cfg,
                            const LocalSolver& solver) {
  validateAggregation(P, metric, cfg, solver);
  const auto c = cfg.resolved(P.n, P.m());
  auto candidates = buildCandidates(P, c, solver);
  const auto best = estimateBestCandidate(candidates.perms, P, metric, c);
  AggregationResult out{candidates.perms[best.index], best.estimatedCost, std::nullopt,
                        candidates.perms.size(), candidates.provenance[best.index]};
  out.exactCost = cost(out.median, P, metric);
  return out;
}

}  // namespace rankagg
