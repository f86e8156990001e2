#include "rankagg/mpc_algorithms.hpp"

#include "rankagg/mpc/lanes.hpp"

namespace rankagg::mpc {

namespace {

Engine runLane(Lane& lane, const std::vector<Placement>& inputs, const MpcConfig& cfg) {
  Engine engine(cfg);
  for (const auto& p : inputs) engine.place(p);
  for (std::size_t r = 1; r <= lane.rounds() && !engine.failed(); ++r) {
    engine.step([&](Context& ctx) {
      if (lane.owns(ctx.id())) lane.act(ctx, r);
    });
  }
  if (engine.failed()) throw CapViolation(engine.trace());
  return engine;
}

std::vector<Placement> placeInstance(const Instance& Q, const MpcConfig& cfg, MachineId base) {
  std::vector<Placement> out;
  for (std::size_t k = 0; k < Q.m(); ++k) {
    auto part = distributePermutation(Q.perms[k], cfg, k, base);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

void requireGroup(const Instance& Q, std::size_t size, const char* what, const MpcConfig& cfg) {
  if (Q.m() != size) {
    throw InvalidInput(std::string(what) + " requires exactly " + std::to_string(size) +
                       " permutations, got " + std::to_string(Q.m()));
  }
  if (Q.n != cfg.n) throw InvalidInput(std::string(what) + ": instance n differs from the MPC n");
}

template <typename L>
MpcMedianResult runMedian(L& lane, const Instance& Q, const MpcConfig& cfg) {
  auto engine = runLane(lane, placeInstance(Q, cfg, lane.begin()), cfg);
  return {reassemble(engine.stores(), cfg, lane.begin()), engine.trace()};
}

}  // namespace

MpcDistanceResult mpcDistance(Metric metric, const Permutation& p, const Permutation& q,
                              const MpcConfig& cfg, const WeightVector* w) {
  requireSameSize(p, q);
  if (isWeighted(metric) && !w) {
    throw InvalidInput(std::string(toString(metric)) + " requires a weight vector");
  }
  IdSpace ids;
  DistanceLane lane(metric, cfg, ids);
  auto inputs = distributePermutation(p, cfg, 0, lane.begin());
  auto second = distributePermutation(q, cfg, 1, lane.begin());
  inputs.insert(inputs.end(), second.begin(), second.end());
  if (isWeighted(metric)) {
    auto ws = distributeWeights(*w, cfg, lane.begin());
    inputs.insert(inputs.end(), ws.begin(), ws.end());
  }
  auto engine = runLane(lane, inputs, cfg);
  const auto* result = engine.read(lane.resultMachine(), kResultSlot);
  if (!result) throw std::logic_error("mpc distance: no result");
  return {lane.decode(result->front()), engine.trace()};
}

MpcMedianResult mpcHammingMedian(const Instance& Q, const MpcConfig& cfg) {
  requireGroup(Q, 3, "mpcHammingMedian", cfg);
  IdSpace ids;
  HammingMedianLane lane(cfg, ids);
  return runMedian(lane, Q, cfg);
}

MpcMedianResult mpcFootruleMedian(const Instance& Q, const MpcConfig& cfg) {
  requireGroup(Q, 3, "mpcFootruleMedian", cfg);
  IdSpace ids;
  FootruleMedianLane lane(cfg, ids);
  return runMedian(lane, Q, cfg);
}

MpcMedianResult mpcKendallMedian(const Instance& Q, const MpcConfig& cfg, std::uint64_t seed) {
  requireGroup(Q, 3, "mpcKendallMedian", cfg);
  IdSpace ids;
  KendallMedianLane lane(cfg, ids, seed);
  return runMedian(lane, Q, cfg);
}

MpcReconstructResult mpcUlamReconstruct(const Instance& Q, const ReconstructParams& params,
                                        const MpcConfig& cfg) {
  requireGroup(Q, 5, "mpcUlamReconstruct", cfg);
  auto p = params;
  p.epsilon = cfg.epsilon;
  IdSpace ids;
  UlamReconstructLane lane(cfg, ids, p);
  auto engine = runLane(lane, placeInstance(Q, cfg, lane.begin()), cfg);
  MpcReconstructResult out{reassemble(engine.stores(), cfg, lane.begin()), 0, {}, {}, {}, 0,
                           engine.trace()};
  const auto& words = *engine.read(lane.dpMachine(), kResultSlot);
  out.blockEd = words[0];
  const auto chosen = static_cast<std::size_t>(words[1]);
  std::size_t k = 2;
  for (std::size_t c = 0; c < chosen; ++c, k += 2) {
    out.chosen.push_back({static_cast<std::size_t>(words[k]), static_cast<std::size_t>(words[k + 1])});
  }
  for (std::size_t j = 0; j < cfg.blockCount(); ++j, k += 2) {
    out.tuplesPerBlock.push_back(static_cast<std::size_t>(words[k]));
    out.truncated.push_back(words[k + 1] != 0);
  }
  out.compositionWords = static_cast<std::size_t>(words[k]);
  return out;
}

LocalSolver mpcLocalSolver(Metric metric, const ReconstructParams& params) {
  if (metric == Metric::Ulam || metric == Metric::WeightedUlam) {
    return {5, "ulam-reconstruct", [params](const Instance& Q, std::uint64_t) {
              return scalableMedianReconstruct(Q, params).output;
            }};
  }
  return defaultSolver(metric);
}

}  // namespace rankagg::mpc
