#pragma once

// Distributed algorithms as lanes: each lane owns a contiguous id range and
// a fixed round schedule, so several lanes can run side by side in one
// program. Inputs use the standard permutation layout below.

#include <memory>
#include <vector>

#include "rankagg/distance.hpp"
#include "rankagg/mpc.hpp"
#include "rankagg/permutation.hpp"
#include "rankagg/reconstruct.hpp"

namespace rankagg::mpc {

/// Standard layout of input permutation k on block machine i: the values at
/// positions of block i, and the positions of the elements of block i.
constexpr Slot fwdSlot(std::size_t k) { return static_cast<Slot>(100 + 2 * k); }
constexpr Slot invSlot(std::size_t k) { return static_cast<Slot>(101 + 2 * k); }
/// Packed weights of the elements of block i.
inline constexpr Slot kWeightSlot = 99;
/// Output permutation of a median lane, same layout.
inline constexpr Slot kOutFwd = 90;
inline constexpr Slot kOutInv = 91;
/// Result word of a distance lane, or the summary of a reconstruction lane.
inline constexpr Slot kResultSlot = 92;

/// Placements of p as input k on machines base .. base+K-1.
std::vector<Placement> distributePermutation(const Permutation& p, const MpcConfig& cfg,
                                             std::size_t k = 0, MachineId base = 0);
/// Placements of packed weights on machines base .. base+K-1.
std::vector<Placement> distributeWeights(const WeightVector& w, const MpcConfig& cfg,
                                         MachineId base = 0);
/// Reads the forward slices of slot `fwd` on machines base .. base+K-1.
Permutation reassemble(const std::map<MachineId, Store>& stores, const MpcConfig& cfg,
                       MachineId base = 0, Slot fwd = kOutFwd);

/// Positions (or elements) of block i as the words of one slice.
Words blockSlice(std::span<const Element> values, const MpcConfig& cfg, std::size_t i);

class Lane {
 public:
  virtual ~Lane() = default;
  virtual std::size_t rounds() const = 0;
  /// Called for machines in [begin, end) during local rounds 1..rounds().
  virtual void act(Context& ctx, std::size_t round) = 0;

  MachineId begin() const noexcept { return begin_; }
  MachineId end() const noexcept { return end_; }
  bool owns(MachineId id) const noexcept { return id >= begin_ && id < end_; }
  /// Machine that holds block i of the inputs and of the output.
  MachineId blockMachine(std::size_t i) const noexcept { return begin_ + i; }

 protected:
  MachineId begin_ = 0;
  MachineId end_ = 0;
};

/// dist(p, q) for inputs 0 and 1 (plus weights for weighted metrics).
/// Result: a word in slot kResultSlot of resultMachine().
class DistanceLane : public Lane {
 public:
  DistanceLane(Metric metric, const MpcConfig& cfg, IdSpace& ids);
  std::size_t rounds() const override { return rounds_; }
  void act(Context& ctx, std::size_t round) override;
  MachineId resultMachine() const noexcept { return result_; }
  double decode(Word w) const;
  Metric metric() const noexcept { return metric_; }

  /// Machines a Kendall lane touches: K block machines, K·K ordered block
  /// pair machines and the reduction tree over the pair machines.
  static std::size_t kendallMachineCount(const MpcConfig& cfg, bool weighted);

 private:
  void localSum(Context& ctx);
  void kendall(Context& ctx, std::size_t round);
  void ulamOracle(Context& ctx, std::size_t round);

  Metric metric_;
  MpcConfig cfg_;
  std::size_t K_;
  std::size_t cap_;
  std::size_t rounds_ = 0;
  Tree tree_;
  MachineId pairBase_ = 0;
  std::size_t relayGroup_ = 1;
  MachineId result_ = 0;
};

/// Majority per position, then rank pairing of free positions with unused
/// elements through a prefix sum. Inputs 0..2.
class HammingMedianLane : public Lane {
 public:
  HammingMedianLane(const MpcConfig& cfg, IdSpace& ids);
  std::size_t rounds() const override { return 3 + 2 * tree_.depth(); }
  void act(Context& ctx, std::size_t round) override;

 private:
  MpcConfig cfg_;
  std::size_t K_;
  MachineId rendezvous_;
  Tree tree_;
};

/// Position-wise medians sorted by bucketing on the median value. Inputs 0..2.
class FootruleMedianLane : public Lane {
 public:
  FootruleMedianLane(const MpcConfig& cfg, IdSpace& ids);
  std::size_t rounds() const override { return 3 + 2 * tree_.depth(); }
  void act(Context& ctx, std::size_t round) override;

 private:
  MpcConfig cfg_;
  std::size_t K_;
  MachineId buckets_;
  Tree tree_;
};

/// One multi-pivot KWIK-SORT step: the t lowest-priority elements form a
/// pivot tree that routes every other element to a bucket, and each bucket
/// is finished locally. Pivot priorities are those of the offline solver, so
/// the output is the same permutation. Inputs 0..2.
class KendallMedianLane : public Lane {
 public:
  KendallMedianLane(const MpcConfig& cfg, IdSpace& ids, std::uint64_t seed);
  std::size_t rounds() const override { return 6 + 2 * tree_.depth(); }
  void act(Context& ctx, std::size_t round) override;
  std::size_t pivotCount() const noexcept { return t_; }

  static std::size_t pivotCount(const MpcConfig& cfg);

 private:
  MpcConfig cfg_;
  std::size_t K_;
  std::uint64_t seed_;
  std::size_t t_;
  std::vector<Element> pivots_;  // ascending priority
  MachineId coordinator_;
  MachineId relays_;
  RelayPlan plan_;
  MachineId buckets_;
  Tree tree_;
};

/// Windowed block reconstruction of five inputs (0..4), in phases: window
/// keys, tuple enumeration per block, one machine per tuple, composition on
/// a single machine from tuple summaries, and rank pairing of the remaining
/// dummies with the unused elements.
class UlamReconstructLane : public Lane {
 public:
  UlamReconstructLane(const MpcConfig& cfg, IdSpace& ids, const ReconstructParams& params);
  std::size_t rounds() const override { return 10 + 2 * tree_.depth(); }
  void act(Context& ctx, std::size_t round) override;

  /// Machine whose kResultSlot holds {blockEd, composition words, then per
  /// block: tuple count and truncation flag}.
  MachineId dpMachine() const noexcept { return dp_; }

 private:
  struct WindowMachine {
    std::size_t block;  // 1-based
    std::size_t coord;
    Window w;
    bool degenerate;
  };
  void blockRound(Context& ctx, std::size_t round, std::size_t i);

  MpcConfig cfg_;
  ReconstructParams params_;
  WindowGrid grid_;
  std::size_t K_;
  std::vector<WindowMachine> windows_;
  std::vector<MachineId> windowBase_;  // per block
  MachineId windowsBegin_;
  MachineId enumerators_;
  MachineId tuples_;
  MachineId dp_;
  MachineId rendezvous_;
  Tree tree_;
};

/// Cap exponent for the reconstruction lane: composition keeps every tuple
/// summary on one machine, which the default kappa = 1 cannot hold.
inline constexpr double kRelaxedKappa = 8.0;

}  // namespace rankagg::mpc
