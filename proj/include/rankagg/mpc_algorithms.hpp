#pragma once

// MPC versions of the distance kernels, the local solvers, the Ulam
// reconstruction and the sampling framework. Every call runs a fresh
// simulated cluster and throws CapViolation when a machine overflows.

#include <cstdint>
#include <vector>

#include "rankagg/distance.hpp"
#include "rankagg/framework.hpp"
#include "rankagg/mpc.hpp"
#include "rankagg/reconstruct.hpp"

namespace rankagg::mpc {

struct MpcDistanceResult {
  double value = 0.0;
  MpcTrace trace;
};

/// Ulam metrics return the indel distance, as `distance` does.
MpcDistanceResult mpcDistance(Metric metric, const Permutation& p, const Permutation& q,
                              const MpcConfig& cfg, const WeightVector* w = nullptr);

struct MpcMedianResult {
  Permutation output;
  MpcTrace trace;
};

/// |Q| = 3 for these three; weights do not change the outputs.
MpcMedianResult mpcHammingMedian(const Instance& Q, const MpcConfig& cfg);
MpcMedianResult mpcFootruleMedian(const Instance& Q, const MpcConfig& cfg);
MpcMedianResult mpcKendallMedian(const Instance& Q, const MpcConfig& cfg, std::uint64_t seed);

struct MpcReconstructResult {
  Permutation output;
  std::int64_t blockEd = 0;
  std::vector<Choice> chosen;
  std::vector<std::size_t> tuplesPerBlock;
  std::vector<bool> truncated;
  /// Words on the composition machine when it ran.
  std::size_t compositionWords = 0;
  MpcTrace trace;
};

/// |Q| = 5. params.epsilon is replaced by cfg.epsilon so blocks and machines
/// line up. Needs a relaxed cap (see kRelaxedKappa).
MpcReconstructResult mpcUlamReconstruct(const Instance& Q, const ReconstructParams& params,
                                        const MpcConfig& cfg);

/// Offline solver that the MPC framework mirrors for a metric: the default
/// solvers for Hamming, footrule and Kendall, the windowed reconstruction
/// (r = 5) for Ulam.
LocalSolver mpcLocalSolver(Metric metric, const ReconstructParams& params = {});

struct MpcAggregateResult {
  AggregationResult result;
  MpcTrace trace;
};

/// The sampling framework on the simulated cluster: local solutions computed
/// by parallel solver lanes, every (candidate, sample) distance by its own
/// distance lane, the argmin over a min-reduce tree, and the exact cost of the
/// winner. Same draws and tie rules as `aggregate` with mpcLocalSolver.
MpcAggregateResult mpcAggregate(const Instance& P, Metric metric, const MpcConfig& cfg,
                                const FrameworkConfig& fcfg, const ReconstructParams& params = {});

}  // namespace rankagg::mpc
