#include <algorithm>
#include <cmath>
#include <memory>

#include "batches.hpp"
#include "rankagg/mpc/lanes.hpp"
#include "rankagg/mpc_algorithms.hpp"

namespace rankagg::mpc {

namespace {

constexpr Word kCopy = 70;         // {kCopy, source, fwd..., inv...}
constexpr Word kWeightCopy = 71;   // {kWeightCopy, weights...}
constexpr Word kWinnerCopy = 72;   // {kWinnerCopy, fwd..., inv...}
constexpr Word kValue = 73;        // {kValue, index, packed double}
constexpr Word kWinner = 74;       // {kWinner, candidate}
constexpr Word kBest = 75;         // {kBest, candidate, packed estimate}

/// Two relay layers with implicit routing: the source reaches n1 first-layer
/// relays, each of those up to f second-layer relays, each of those up to f
/// targets. f is the smallest fan-out with f^3 >= targets, so every multicast
/// takes three hops whatever its size.
struct RelayTree {
  std::vector<MachineId> targets;
  std::size_t f = 1;
  MachineId l1 = 0;
  MachineId l2 = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

RelayTree planTree(std::vector<MachineId> targets, IdSpace& ids) {
  RelayTree t;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  t.targets = std::move(targets);
  const auto T = t.targets.size();
  while (t.f * t.f * t.f < T) ++t.f;
  t.n2 = (T + t.f - 1) / t.f;
  t.n1 = (t.n2 + t.f - 1) / t.f;
  t.l1 = ids.take(t.n1);
  t.l2 = ids.take(t.n2);
  return t;
}

enum class Kind { Input, Weight, Solver, Distance, Exact, Accumulator, Gather, Final, Output, Relay };

struct Role {
  MachineId begin;
  MachineId end;
  Kind kind;
  std::size_t index;
};

class AggregateProgram {
 public:
  AggregateProgram(const Instance& P, Metric metric, const MpcConfig& cfg,
                   const FrameworkConfig& fcfg, const ReconstructParams& params);

  std::vector<Placement> inputs() const;
  std::size_t rounds() const noexcept { return finalRound_; }
  void act(Context& ctx, std::size_t round);
  MpcAggregateResult result(const Engine& engine) const;

 private:
  void addRole(MachineId begin, MachineId end, Kind kind, std::size_t index) {
    if (end > begin) roles_.push_back({begin, end, kind, index});
  }
  const Role& roleOf(MachineId id) const;
  std::size_t addPlan(std::vector<MachineId> targets);
  void send(Context& ctx, std::size_t plan, const Words& payload) const;
  void relay(Context& ctx, std::size_t plan) const;
  /// Copies the block held under (fwd, inv) slots into a tagged payload.
  static Words copyOf(const Store& st, Word tag, Word source, Slot fwd, Slot inv);
  void absorb(Context& ctx, const Role& role);
  /// A candidate source that hears it won forwards its block; all clear.
  void winnerStep(Context& ctx, Word code, std::size_t i, Slot fwd, Slot inv);

  Word inputCode(std::size_t k) const { return static_cast<Word>(k); }
  Word solverCode(std::size_t t) const { return static_cast<Word>(P_.m() + t); }
  Word candidateSource(std::size_t c) const {
    return c < sampled_.size() ? inputCode(sampled_[c]) : solverCode(c - sampled_.size());
  }

  const Instance& P_;
  Metric metric_;
  MpcConfig cfg_;
  FrameworkConfig fcfg_;
  std::size_t K_;
  std::size_t m_;
  std::vector<std::size_t> sampled_;
  std::vector<std::vector<std::size_t>> subsets_;
  std::vector<std::size_t> S_;
  std::size_t C_;

  IdSpace ids_;
  MachineId inputBase_, weightBase_, accBase_, final_, outputBase_;
  std::vector<std::unique_ptr<Lane>> solvers_;
  std::vector<std::unique_ptr<DistanceLane>> dist_;   // c * |S| + s
  std::vector<std::unique_ptr<DistanceLane>> exact_;  // k
  Tree gather_;

  std::vector<RelayTree> plans_;
  std::vector<std::size_t> inputPlan_;   // k * K + i
  std::vector<std::size_t> weightPlan_;  // i
  std::vector<std::size_t> solverPlan_;  // t * K + i
  std::size_t announcePlan_ = 0;
  std::vector<std::size_t> winnerPlan_;  // per source code * K + i
  std::vector<Role> roles_;

  std::size_t solverStart_, candidateRound_, distStart_, collectRound_, argminRound_,
      winnerRound_, exactStart_, exactCollect_, finalRound_;
};

AggregateProgram::AggregateProgram(const Instance& P, Metric metric, const MpcConfig& cfg,
                                   const FrameworkConfig& fcfg, const ReconstructParams& params)
    : P_(P), metric_(metric), cfg_(cfg), K_(cfg.blockCount()), m_(P.m()) {
  fcfg_ = fcfg.resolved(P.n, P.m());
  sampled_ = drawCandidateIndices(m_, fcfg_);
  subsets_ = drawSubsets(m_, fcfg_);
  S_ = drawEvaluationSet(m_, fcfg_);
  C_ = sampled_.size() + subsets_.size();
  const auto cap = cfg.wordCap();
  auto rp = params;
  rp.epsilon = cfg.epsilon;

  inputBase_ = ids_.take(m_ * K_);
  addRole(inputBase_, ids_.used(), Kind::Input, 0);
  weightBase_ = ids_.take(K_);
  addRole(weightBase_, ids_.used(), Kind::Weight, 0);
  for (std::size_t t = 0; t < subsets_.size(); ++t) {
    const auto before = ids_.used();
    switch (metric) {
      case Metric::Hamming:
      case Metric::WeightedHamming:
        solvers_.push_back(std::make_unique<HammingMedianLane>(cfg, ids_));
        break;
      case Metric::Footrule:
        solvers_.push_back(std::make_unique<FootruleMedianLane>(cfg, ids_));
        break;
      case Metric::Kendall:
      case Metric::WeightedKendall:
        solvers_.push_back(std::make_unique<KendallMedianLane>(cfg, ids_, solverSeed(fcfg_, t)));
        break;
      case Metric::Ulam:
      case Metric::WeightedUlam:
        solvers_.push_back(std::make_unique<UlamReconstructLane>(cfg, ids_, rp));
        break;
    }
    addRole(before, ids_.used(), Kind::Solver, t);
  }
  for (std::size_t c = 0; c < C_; ++c) {
    for (std::size_t s = 0; s < S_.size(); ++s) {
      const auto before = ids_.used();
      dist_.push_back(std::make_unique<DistanceLane>(metric, cfg, ids_));
      addRole(before, ids_.used(), Kind::Distance, c * S_.size() + s);
    }
  }
  for (std::size_t k = 0; k < m_; ++k) {
    const auto before = ids_.used();
    exact_.push_back(std::make_unique<DistanceLane>(metric, cfg, ids_));
    addRole(before, ids_.used(), Kind::Exact, k);
  }
  accBase_ = ids_.take(C_);
  addRole(accBase_, ids_.used(), Kind::Accumulator, 0);
  {
    std::vector<MachineId> leaves(C_);
    for (std::size_t c = 0; c < C_; ++c) leaves[c] = accBase_ + c;
    const auto before = ids_.used();
    gather_ = Tree(leaves, 3, cap, ids_);
    addRole(before, ids_.used(), Kind::Gather, 0);
  }
  final_ = ids_.take(1);
  addRole(final_, ids_.used(), Kind::Final, 0);
  outputBase_ = ids_.take(K_);
  addRole(outputBase_, ids_.used(), Kind::Output, 0);

  // Who needs which block at the start.
  const bool weighted = isWeighted(metric);
  for (std::size_t k = 0; k < m_; ++k) {
    for (std::size_t i = 0; i < K_; ++i) {
      std::vector<MachineId> targets;
      for (std::size_t t = 0; t < subsets_.size(); ++t) {
        const auto& Q = subsets_[t];
        if (std::find(Q.begin(), Q.end(), k) != Q.end()) targets.push_back(solvers_[t]->blockMachine(i));
      }
      for (std::size_t c = 0; c < C_; ++c) {
        for (std::size_t s = 0; s < S_.size(); ++s) {
          if (candidateSource(c) == inputCode(k) || S_[s] == k) {
            targets.push_back(dist_[c * S_.size() + s]->blockMachine(i));
          }
        }
      }
      targets.push_back(exact_[k]->blockMachine(i));
      inputPlan_.push_back(addPlan(std::move(targets)));
    }
  }
  if (weighted) {
    for (std::size_t i = 0; i < K_; ++i) {
      std::vector<MachineId> targets;
      for (const auto& d : dist_) targets.push_back(d->blockMachine(i));
      for (const auto& e : exact_) targets.push_back(e->blockMachine(i));
      weightPlan_.push_back(addPlan(std::move(targets)));
    }
  }
  for (std::size_t t = 0; t < subsets_.size(); ++t) {
    const auto c = sampled_.size() + t;
    for (std::size_t i = 0; i < K_; ++i) {
      std::vector<MachineId> targets;
      for (std::size_t s = 0; s < S_.size(); ++s) targets.push_back(dist_[c * S_.size() + s]->blockMachine(i));
      solverPlan_.push_back(addPlan(std::move(targets)));
    }
  }
  // The argmin is announced to every block of every candidate source; the
  // winner's blocks then go to the exact-cost lanes and the output machines.
  std::vector<MachineId> sources;
  winnerPlan_.assign((m_ + subsets_.size()) * K_, 0);
  for (std::size_t code = 0; code < m_ + subsets_.size(); ++code) {
    bool candidate = code >= m_ || std::find(sampled_.begin(), sampled_.end(), code) != sampled_.end();
    if (!candidate) continue;
    for (std::size_t i = 0; i < K_; ++i) {
      sources.push_back(code < m_ ? inputBase_ + code * K_ + i : solvers_[code - m_]->blockMachine(i));
      std::vector<MachineId> targets;
      for (const auto& e : exact_) targets.push_back(e->blockMachine(i));
      targets.push_back(outputBase_ + i);
      winnerPlan_[code * K_ + i] = addPlan(std::move(targets));
    }
  }
  announcePlan_ = addPlan(std::move(sources));
  std::sort(roles_.begin(), roles_.end(), [](const Role& a, const Role& b) { return a.begin < b.begin; });

  // Fixed schedule: three-hop multicasts, lanes in lockstep.
  solverStart_ = 5;
  candidateRound_ = solverStart_ + solvers_.front()->rounds();
  distStart_ = candidateRound_ + 4;
  collectRound_ = distStart_ + dist_.front()->rounds();
  argminRound_ = collectRound_ + 1 + gather_.depth();
  winnerRound_ = argminRound_ + 3;
  exactStart_ = winnerRound_ + 4;
  exactCollect_ = exactStart_ + exact_.front()->rounds();
  finalRound_ = exactCollect_ + 1;
}

std::size_t AggregateProgram::addPlan(std::vector<MachineId> targets) {
  plans_.push_back(planTree(std::move(targets), ids_));
  const auto& p = plans_.back();
  addRole(p.l1, p.l1 + p.n1 + p.n2, Kind::Relay, plans_.size() - 1);
  return plans_.size() - 1;
}

const Role& AggregateProgram::roleOf(MachineId id) const {
  auto it = std::upper_bound(roles_.begin(), roles_.end(), id,
                             [](MachineId v, const Role& r) { return v < r.begin; });
  if (it == roles_.begin() || id >= std::prev(it)->end) {
    throw std::logic_error("mpc aggregate: machine " + std::to_string(id) + " has no role");
  }
  return *std::prev(it);
}

void AggregateProgram::send(Context& ctx, std::size_t plan, const Words& payload) const {
  const auto& p = plans_[plan];
  for (std::size_t a = 0; a < p.n1; ++a) ctx.send(p.l1 + a, payload);
}

void AggregateProgram::relay(Context& ctx, std::size_t plan) const {
  const auto& p = plans_[plan];
  for (const auto& m : ctx.inbox()) {
    if (ctx.id() < p.l2) {
      const auto a = static_cast<std::size_t>(ctx.id() - p.l1);
      for (auto r = a * p.f; r < std::min(p.n2, (a + 1) * p.f); ++r) ctx.send(p.l2 + r, m.payload);
    } else {
      const auto r = static_cast<std::size_t>(ctx.id() - p.l2);
      for (auto t = r * p.f; t < std::min(p.targets.size(), (r + 1) * p.f); ++t) {
        ctx.send(p.targets[t], m.payload);
      }
    }
  }
}

Words AggregateProgram::copyOf(const Store& st, Word tag, Word source, Slot fwd, Slot inv) {
  Words w{tag};
  if (tag == kCopy) w.push_back(source);
  const auto& f = st.at(fwd);
  const auto& v = st.at(inv);
  w.insert(w.end(), f.begin(), f.end());
  w.insert(w.end(), v.begin(), v.end());
  return w;
}

void AggregateProgram::absorb(Context& ctx, const Role& role) {
  auto& st = ctx.store();
  for (const auto& m : ctx.inbox()) {
    const auto tag = m.payload[0];
    if (tag == kWeightCopy) {
      st[kWeightSlot] = Words(m.payload.begin() + 1, m.payload.end());
      continue;
    }
    const bool isCopy = tag == kCopy;
    if (!isCopy && tag != kWinnerCopy) continue;
    const auto body = m.payload.begin() + (isCopy ? 2 : 1);
    const auto len = static_cast<std::size_t>(m.payload.end() - body) / 2;
    auto place = [&](Slot fwd, Slot inv) {
      st[fwd] = Words(body, body + static_cast<std::ptrdiff_t>(len));
      st[inv] = Words(body + static_cast<std::ptrdiff_t>(len), m.payload.end());
    };
    const Word source = isCopy ? m.payload[1] : -1;
    switch (role.kind) {
      case Kind::Solver: {
        const auto& Q = subsets_[role.index];
        const auto k = static_cast<std::size_t>(std::find(Q.begin(), Q.end(), static_cast<std::size_t>(source)) - Q.begin());
        place(fwdSlot(k), invSlot(k));
        break;
      }
      case Kind::Distance: {
        const auto c = role.index / S_.size();
        const auto s = role.index % S_.size();
        if (source == candidateSource(c)) place(fwdSlot(0), invSlot(0));
        if (source == inputCode(S_[s])) place(fwdSlot(1), invSlot(1));
        break;
      }
      case Kind::Exact:
        if (isCopy) {
          place(fwdSlot(1), invSlot(1));
        } else {
          place(fwdSlot(0), invSlot(0));
        }
        break;
      case Kind::Output:
        place(kOutFwd, kOutInv);
        break;
      default:
        break;
    }
  }
}

void AggregateProgram::winnerStep(Context& ctx, Word code, std::size_t i, Slot fwd, Slot inv) {
  auto& st = ctx.store();
  for (const auto& m : ctx.inbox()) {
    if (m.payload[0] != kWinner) continue;
    if (candidateSource(static_cast<std::size_t>(m.payload[1])) == code) {
      send(ctx, winnerPlan_[static_cast<std::size_t>(code) * K_ + i], copyOf(st, kWinnerCopy, 0, fwd, inv));
    }
  }
  st.clear();
}

void AggregateProgram::act(Context& ctx, std::size_t round) {
  const auto id = ctx.id();
  const auto& role = roleOf(id);
  auto& st = ctx.store();
  if (role.kind == Kind::Relay) {
    relay(ctx, role.index);
    return;
  }
  const bool absorbRound = round == 4 || round == candidateRound_ + 3 || round == winnerRound_ + 3;
  if (absorbRound && (role.kind == Kind::Solver || role.kind == Kind::Distance ||
                      role.kind == Kind::Exact || role.kind == Kind::Output)) {
    absorb(ctx, role);
    return;
  }
  auto within = [&](std::size_t start, const Lane& lane) {
    return round >= start && round < start + lane.rounds();
  };

  switch (role.kind) {
    case Kind::Input: {
      const auto slot = static_cast<std::size_t>(id - inputBase_);
      const auto k = slot / K_;
      if (round == 1) {
        send(ctx, inputPlan_[slot], copyOf(st, kCopy, inputCode(k), fwdSlot(0), invSlot(0)));
        if (std::find(sampled_.begin(), sampled_.end(), k) == sampled_.end()) st.clear();
      } else if (round == winnerRound_) {
        winnerStep(ctx, inputCode(k), slot % K_, fwdSlot(0), invSlot(0));
      }
      break;
    }
    case Kind::Weight:
      if (round == 1) {
        Words payload{kWeightCopy};
        const auto& w = st.at(kWeightSlot);
        payload.insert(payload.end(), w.begin(), w.end());
        send(ctx, weightPlan_[static_cast<std::size_t>(id - weightBase_)], payload);
        st.clear();
      }
      break;
    case Kind::Solver: {
      auto& lane = *solvers_[role.index];
      const bool block = id < lane.blockMachine(K_);
      const auto i = static_cast<std::size_t>(id - lane.begin());
      if (within(solverStart_, lane)) {
        lane.act(ctx, round - solverStart_ + 1);
      } else if (block && round == candidateRound_) {
        send(ctx, solverPlan_[role.index * K_ + i],
             copyOf(st, kCopy, solverCode(role.index), kOutFwd, kOutInv));
      } else if (block && round == winnerRound_) {
        winnerStep(ctx, solverCode(role.index), i, kOutFwd, kOutInv);
      }
      break;
    }
    case Kind::Distance:
    case Kind::Exact: {
      const bool isExact = role.kind == Kind::Exact;
      auto& lane = isExact ? *exact_[role.index] : *dist_[role.index];
      const auto start = isExact ? exactStart_ : distStart_;
      if (within(start, lane)) {
        lane.act(ctx, round - start + 1);
      } else if (round == start + lane.rounds() && id == lane.resultMachine()) {
        const double v = lane.decode(st.at(kResultSlot).front());
        st.clear();
        if (isExact) {
          ctx.send(final_, {kValue, static_cast<Word>(role.index), packDouble(v)});
        } else {
          ctx.send(accBase_ + role.index / S_.size(),
                   {kValue, static_cast<Word>(role.index % S_.size()), packDouble(v)});
        }
      }
      break;
    }
    case Kind::Accumulator:
    case Kind::Final: {
      const bool isFinal = role.kind == Kind::Final;
      if (round != (isFinal ? finalRound_ : collectRound_ + 1)) break;
      std::vector<std::pair<Word, double>> values;
      forRecords(ctx.inbox(), kValue, 2, [&](const Word* r) { values.push_back({r[0], unpackDouble(r[1])}); });
      std::sort(values.begin(), values.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double sum = 0.0;
      for (const auto& [index, v] : values) sum += v;
      const double mean = sum / static_cast<double>(isFinal ? m_ : S_.size());
      if (isFinal) {
        st[kResultSlot] = {packDouble(mean)};
      } else {
        ctx.send(gather_.parentOf(id), {kBest, static_cast<Word>(id - accBase_), packDouble(mean)});
      }
      break;
    }
    case Kind::Gather: {
      if (ctx.inbox().empty()) break;
      // Min-reduce; ties go to the lower candidate index, as offline.
      Word best = -1;
      double bestEst = 0.0;
      for (const auto& m : ctx.inbox()) {
        if (m.payload[0] != kBest) continue;
        const double est = unpackDouble(m.payload[2]);
        if (best < 0 || est < bestEst || (est == bestEst && m.payload[1] < best)) {
          best = m.payload[1];
          bestEst = est;
        }
      }
      if (id == gather_.root()) {
        st[kResultSlot] = {best, packDouble(bestEst)};
        send(ctx, announcePlan_, {kWinner, best});
      } else {
        ctx.send(gather_.parentOf(id), {kBest, best, packDouble(bestEst)});
      }
      break;
    }
    default:
      break;
  }
}

MpcAggregateResult AggregateProgram::result(const Engine& engine) const {
  const auto* best = engine.read(gather_.root(), kResultSlot);
  const auto* exact = engine.read(final_, kResultSlot);
  if (!best || !exact) throw std::logic_error("mpc aggregate: missing result");
  const auto c = static_cast<std::size_t>((*best)[0]);
  Provenance prov;
  if (c < sampled_.size()) {
    prov = {Provenance::Kind::SampledInput, {sampled_[c]}};
  } else {
    prov = {Provenance::Kind::LocalSolution, subsets_[c - sampled_.size()]};
  }
  AggregationResult r{reassemble(engine.stores(), cfg_, outputBase_), unpackDouble((*best)[1]),
                      unpackDouble(exact->front()), C_, std::move(prov)};
  return {std::move(r), engine.trace()};
}

std::vector<Placement> AggregateProgram::inputs() const {
  std::vector<Placement> out;
  for (std::size_t k = 0; k < m_; ++k) {
    auto part = distributePermutation(P_.perms[k], cfg_, 0, inputBase_ + k * K_);
    out.insert(out.end(), part.begin(), part.end());
  }
  if (isWeighted(metric_)) {
    auto ws = distributeWeights(*P_.weights, cfg_, weightBase_);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

}  // namespace

MpcAggregateResult mpcAggregate(const Instance& P, Metric metric, const MpcConfig& cfg,
                                const FrameworkConfig& fcfg, const ReconstructParams& params) {
  auto rp = params;
  rp.epsilon = cfg.epsilon;
  validateAggregation(P, metric, fcfg, mpcLocalSolver(metric, rp));
  if (P.n != cfg.n) throw InvalidInput("mpcAggregate: instance n differs from the MPC n");
  AggregateProgram program(P, metric, cfg, fcfg, rp);
  Engine engine(cfg);
  for (const auto& p : program.inputs()) engine.place(p);
  for (std::size_t r = 1; r <= program.rounds() && !engine.failed(); ++r) {
    engine.step([&](Context& ctx) { program.act(ctx, r); });
  }
  if (engine.failed()) throw CapViolation(engine.trace());
  return program.result(engine);
}

}  // namespace rankagg::mpc
