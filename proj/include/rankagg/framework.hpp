#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankagg/distance.hpp"
#include "rankagg/permutation.hpp"

namespace rankagg {

/// dist(x, p_i) + dist(x, p_j) - dist(p_i, p_j) for members i != j of P.
double slack(const Instance& P, std::size_t i, std::size_t j, const Permutation& x, Metric metric);

struct SlackReport {
  std::map<std::pair<std::size_t, std::size_t>, double> pairwise;
  double total = 0.0;
  /// total - (2 * C(|Q|,2) * cost(x,Q) - sum of pairwise member distances).
  double identityResidual = 0.0;
  bool identityHolds = true;
};

/// Relative tolerance applied to the total-slack identity check.
inline constexpr double kSlackTolerance = 1e-9;

SlackReport totalSlack(const Instance& Q, const Permutation& x, Metric metric);

struct FrameworkConfig {
  std::size_t r = 3;
  double delta = 0.5;
  /// Zero means "derive from n, delta and the constants below".
  std::size_t candidateSamples = 0;
  std::size_t subsetSamples = 0;
  std::size_t evalSamples = 0;
  double sampleConstant = 4.0;
  double evalConstant = 8.0;
  std::uint64_t seed = 0;
  /// Test mode: evaluate every candidate against all of P instead of S.
  bool fullEvaluation = false;

  /// Copy with all counts filled in and capped at m.
  FrameworkConfig resolved(std::size_t n, std::size_t m) const;
};

struct Provenance {
  enum class Kind { SampledInput, LocalSolution };
  Kind kind = Kind::SampledInput;
  /// Input index for a sampled input, subset indices for a local solution.
  std::vector<std::size_t> indices;
};

struct AggregationResult {
  Permutation median;
  double estimatedCost = 0.0;
  std::optional<double> exactCost;
  std::size_t candidateCount = 0;
  Provenance provenance;
};

struct LocalSolver {
  std::size_t r = 3;
  std::string name;
  std::function<Permutation(const Instance& Q, std::uint64_t seed)> solve;
};

/// The metric's default solver: Hamming majority, footrule position-wise
/// median, Kendall KWIK-SORT (r = 3) and Ulam triangle-removal FVS (r = 5).
LocalSolver defaultSolver(Metric metric);

struct CandidateSet {
  std::vector<Permutation> perms;
  std::vector<Provenance> provenance;
  /// Subsets handed to the local solver, in draw order.
  std::vector<std::vector<std::size_t>> subsets;
};

/// Sampled input indices, in insertion order. `cfg` must be resolved.
std::vector<std::size_t> drawCandidateIndices(std::size_t m, const FrameworkConfig& cfg);
/// The r-subsets Q_t, each drawn without replacement.
std::vector<std::vector<std::size_t>> drawSubsets(std::size_t m, const FrameworkConfig& cfg);
/// The evaluation multiset S, or 0..m-1 in full-evaluation mode.
std::vector<std::size_t> drawEvaluationSet(std::size_t m, const FrameworkConfig& cfg);
/// Seed handed to the local solver for subset t.
std::uint64_t solverSeed(const FrameworkConfig& cfg, std::size_t t);

CandidateSet buildCandidates(const Instance& P, const FrameworkConfig& cfg,
                             const LocalSolver& solver);

struct Estimate {
  std::size_t index = 0;
  double estimatedCost = 0.0;
};

/// Argmin of cost(., S) over C with one shared S; lowest index wins ties.
Estimate estimateBestCandidate(const std::vector<Permutation>& C, const Instance& P,
                               Metric metric, const FrameworkConfig& cfg);

/// Throws InvalidInput when the solver's r differs from cfg.r, when m < r,
/// or when a weighted metric meets an unweighted instance.
void validateAggregation(const Instance& P, Metric metric, const FrameworkConfig& cfg,
                         const LocalSolver& solver);

/// The sampling framework: candidate inputs plus local solutions of random
/// r-subsets, then the best candidate by estimated cost.
AggregationResult aggregate(const Instance& P, Metric metric, const FrameworkConfig& cfg,
                            const LocalSolver& solver);

}  // namespace rankagg
