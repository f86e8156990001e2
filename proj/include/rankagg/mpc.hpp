#pragma once

// Deterministic simulator of the massively parallel computation model:
// machines with word-counted memory, synchronous rounds, messages delivered
// between rounds in (sender, sequence) order.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankagg::mpc {

using Word = std::int64_t;
using Words = std::vector<Word>;
using MachineId = std::uint64_t;
using Slot = std::uint32_t;

inline Word packDouble(double x) noexcept { return std::bit_cast<Word>(x); }
inline double unpackDouble(Word w) noexcept { return std::bit_cast<double>(w); }

struct MpcConfig {
  std::size_t n = 1;
  double epsilon = 0.5;
  /// Cap = ceil(c * n^(1-eps) * max(1, ceil(log2 n))^kappa) words.
  double c = 4.0;
  double kappa = 1.0;
  std::uint64_t machineBudget = 10'000'000;

  void validate() const;
  /// b = ceil(n / ceil(n^eps)); the same split as the reconstruction blocks.
  std::size_t blockSize() const;
  /// K = ceil(n / b) machines per distributed permutation.
  std::size_t blockCount() const;
  std::size_t wordCap() const;
  /// 0-based block holding position or element v (1-based).
  std::size_t blockOf(std::size_t v) const { return (v - 1) / blockSize(); }
  /// First position or element of block i (1-based).
  std::size_t blockStart(std::size_t i) const { return i * blockSize() + 1; }
  std::size_t blockLength(std::size_t i) const;
};

struct OracleCall {
  std::string kind;
  double wordCharge = 0.0;
};

struct Failure {
  MachineId machine = 0;
  std::size_t round = 0;
  std::size_t words = 0;
};

struct MpcTrace {
  std::size_t rounds = 0;
  std::size_t machinesUsed = 0;
  std::size_t peakWordsPerMachine = 0;
  std::size_t totalWords = 0;
  std::size_t totalMessages = 0;
  std::size_t wordCap = 0;
  std::vector<OracleCall> oracleCalls;
  std::optional<Failure> failed;
};

/// JSON object with the trace fields.
std::string traceJson(const MpcTrace& trace);

/// Thrown by the algorithms when their run broke the memory cap.
class CapViolation : public std::runtime_error {
 public:
  explicit CapViolation(MpcTrace trace);
  const MpcTrace& trace() const noexcept { return trace_; }

 private:
  MpcTrace trace_;
};

class MachineBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Message {
  MachineId from = 0;
  Words payload;
};

using Store = std::map<Slot, Words>;

class Engine;

/// What one machine sees during one round.
class Context {
 public:
  MachineId id() const noexcept { return id_; }
  std::size_t round() const noexcept { return round_; }
  Store& store() noexcept { return *store_; }
  const std::vector<Message>& inbox() const noexcept { return *inbox_; }
  void send(MachineId to, Words payload);
  /// Logs a black-box oracle invocation; its memory is not charged.
  void oracle(std::string kind, double wordCharge);
  /// Store of another machine, for use inside an oracle call only.
  const Words* oracleRead(MachineId machine, Slot slot) const;

 private:
  friend class Engine;
  Context(Engine& engine, MachineId id, std::size_t round, Store& store,
          const std::vector<Message>& inbox)
      : engine_(&engine), id_(id), round_(round), store_(&store), inbox_(&inbox) {}

  Engine* engine_;
  MachineId id_;
  std::size_t round_;
  Store* store_;
  const std::vector<Message>* inbox_;
  std::vector<std::pair<MachineId, Words>> outbox_;
};

using RoundFn = std::function<void(Context&)>;

struct Placement {
  MachineId machine = 0;
  Slot slot = 0;
  Words words;
};

struct MpcProgram {
  std::vector<Placement> inputs;
  std::vector<RoundFn> rounds;
};

/// Runs rounds over the machines that hold data or have mail. A machine whose
/// store plus inbox, or store plus outbox, exceeds the cap stops the run and
/// is recorded in trace().failed.
class Engine {
 public:
  explicit Engine(const MpcConfig& cfg);

  void place(const Placement& p);
  /// One synchronous round; false once the run has failed.
  bool step(const RoundFn& fn);
  bool run(const std::vector<RoundFn>& rounds);

  bool failed() const noexcept { return trace_.failed.has_value(); }
  const MpcTrace& trace() const noexcept { return trace_; }
  const MpcConfig& config() const noexcept { return cfg_; }
  std::size_t wordCap() const noexcept { return cap_; }

  const Words* read(MachineId machine, Slot slot) const;
  const std::map<MachineId, Store>& stores() const noexcept { return stores_; }
  /// Messages delivered by the last round and not yet consumed.
  const std::map<MachineId, std::vector<Message>>& inboxes() const noexcept { return inboxes_; }

 private:
  friend class Context;
  void touch(MachineId id);
  void fail(MachineId id, std::size_t words);

  MpcConfig cfg_;
  std::size_t cap_;
  std::map<MachineId, Store> stores_;
  std::map<MachineId, std::vector<Message>> inboxes_;
  std::vector<MachineId> seen_;
  MpcTrace trace_;
};

std::size_t storeWords(const Store& s);

struct RunResult {
  std::map<MachineId, Store> stores;
  std::map<MachineId, std::vector<Message>> inboxes;
  MpcTrace trace;
};

RunResult runProgram(const MpcProgram& program, const MpcConfig& cfg);

/// Hands out disjoint machine id ranges.
class IdSpace {
 public:
  MachineId take(std::size_t count) {
    const auto base = next_;
    next_ += count;
    return base;
  }
  MachineId used() const noexcept { return next_; }

 private:
  MachineId next_ = 0;
};

/// Aggregation tree over a list of leaves with fan-in ⌊cap / messageWords⌋.
/// Internal nodes occupy their own ids; the root is always an internal node,
/// so a single leaf still yields depth 1.
class Tree {
 public:
  Tree() = default;
  Tree(std::vector<MachineId> leaves, std::size_t messageWords, std::size_t cap, IdSpace& ids);

  std::size_t depth() const noexcept { return levels_.size(); }
  std::size_t nodeCount() const noexcept;
  MachineId root() const { return levels_.back().front(); }
  std::size_t fanIn() const noexcept { return fanIn_; }
  const std::vector<MachineId>& leaves() const noexcept { return leaves_; }

  /// Parent of a leaf or internal node.
  MachineId parentOf(MachineId id) const;
  /// Level of an internal node (1 = just above the leaves), 0 if not a node.
  std::size_t levelOf(MachineId id) const;
  /// Children of an internal node, in order.
  std::vector<MachineId> childrenOf(MachineId id) const;
  bool isNode(MachineId id) const { return levelOf(id) != 0; }

 private:
  std::vector<MachineId> leaves_;
  std::map<MachineId, std::size_t> leafIndex_;
  std::vector<std::vector<MachineId>> levels_;
  std::size_t fanIn_ = 2;
};

/// Round functions for tree-based collectives. Each returns the per-round
/// handlers that run at tree nodes; leaves act in the caller's own rounds.
///
/// Prefix sum of width-w vectors. Leaves send {kTagUp, values...} to their
/// parent in round r. Up-sweep: node at level ℓ acts in round r+ℓ; the root
/// then answers downward; every leaf receives {kTagDown, offset..., total...}
/// at the start of round r + 2·depth.
inline constexpr Word kTagUp = 1;
inline constexpr Word kTagDown = 2;
inline constexpr Word kTagGather = 3;

/// Node behaviour for the prefix-sum collective; call from every round.
void prefixSumNode(Context& ctx, const Tree& tree, std::size_t width);
/// Up-sweep only: the root stores the column sums of the leaves' {kTagUp,
/// values...} messages in slot `into`, depth rounds after the leaves send.
/// With `doubles`, every value is a packed double and children are added in
/// id order.
void reduceNode(Context& ctx, const Tree& tree, std::size_t width, Slot into,
                bool doubles = false);
/// Node behaviour for gathering leaf payloads at the root unchanged (the
/// root stores them in slot `into`, in leaf order, each prefixed by its
/// length). Leaves send {kTagGather, payload...}.
void gatherNode(Context& ctx, const Tree& tree, Slot into);

/// Splitting a multicast across relay machines.
struct RelayPlan {
  std::size_t relays = 1;
  std::size_t perRelay = 1;
};
RelayPlan planRelays(std::size_t targets, std::size_t payloadWords, std::size_t cap);

/// Source side: send payload to relays [relayBase, relayBase + plan.relays),
/// each with its share of `targets`. Message: {count, targets..., payload...}.
void multicast(Context& ctx, const std::vector<MachineId>& targets, const Words& payload,
               MachineId relayBase, const RelayPlan& plan);
/// Relay side: forward every relay message in the inbox. Returns true if the
/// machine acted as a relay.
bool relayForward(Context& ctx);

}  // namespace rankagg::mpc
