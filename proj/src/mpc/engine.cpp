#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlohmann/json.hpp"
#include "rankagg/mpc.hpp"
#include "rankagg/permutation.hpp"

namespace rankagg::mpc {

void MpcConfig::validate() const {
  if (n < 1) throw InvalidInput("mpc: n must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("mpc: epsilon must lie in (0,1)");
  if (!(c > 0.0)) throw InvalidInput("mpc: c must be positive");
  if (!(kappa >= 0.0)) throw InvalidInput("mpc: kappa must be nonnegative");
  if (wordCap() < blockSize()) throw InvalidInput("mpc: word cap is below the block size");
}

std::size_t MpcConfig::blockSize() const {
  const double nEps = std::pow(static_cast<double>(n), epsilon);
  const auto K0 = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(nEps - 1e-9)));
  return (n + K0 - 1) / K0;
}

std::size_t MpcConfig::blockCount() const {
  const auto b = blockSize();
  return (n + b - 1) / b;
}

std::size_t MpcConfig::blockLength(std::size_t i) const {
  const auto s = blockStart(i);
  return std::min(blockSize(), n + 1 - s);
}

std::size_t MpcConfig::wordCap() const {
  const double lg = std::max(1.0, std::ceil(std::log2(static_cast<double>(n))));
  const double words =
      c * std::pow(static_cast<double>(n), 1.0 - epsilon) * std::pow(lg, kappa);
  return static_cast<std::size_t>(std::ceil(words - 1e-9));
}

std::string traceJson(const MpcTrace& t) {
  nlohmann::ordered_json j;
  j["rounds"] = t.rounds;
  j["machinesUsed"] = t.machinesUsed;
  j["peakWordsPerMachine"] = t.peakWordsPerMachine;
  j["wordCap"] = t.wordCap;
  j["totalWords"] = t.totalWords;
  j["totalMessages"] = t.totalMessages;
  auto calls = nlohmann::ordered_json::array();
  for (const auto& c : t.oracleCalls) calls.push_back({{"kind", c.kind}, {"wordCharge", c.wordCharge}});
  j["oracleCalls"] = calls;
  if (t.failed) {
    j["failed"] = {{"machine", t.failed->machine}, {"round", t.failed->round},
                   {"words", t.failed->words}};
  } else {
    j["failed"] = nullptr;
  }
  return j.dump();
}

CapViolation::CapViolation(MpcTrace trace)
    : std::runtime_error("mpc: machine " + std::to_string(trace.failed ? trace.failed->machine : 0) +
                         " exceeded the word cap in round " +
                         std::to_string(trace.failed ? trace.failed->round : 0)),
      trace_(std::move(trace)) {}

std::size_t storeWords(const Store& s) {
  std::size_t w = 0;
  for (const auto& [slot, words] : s) w += words.size();
  return w;
}

namespace {

std::size_t inboxWords(const std::vector<Message>& inbox) {
  std::size_t w = 0;
  for (const auto& m : inbox) w += m.payload.size();
  return w;
}

}  // namespace

void Context::send(MachineId to, Words payload) {
  if (to >= engine_->cfg_.machineBudget) {
    throw MachineBudgetExceeded("mpc: machine id " + std::to_string(to) + " exceeds the budget of " +
                                std::to_string(engine_->cfg_.machineBudget));
  }
  outbox_.emplace_back(to, std::move(payload));
}

void Context::oracle(std::string kind, double wordCharge) {
  engine_->trace_.oracleCalls.push_back({std::move(kind), wordCharge});
}

const Words* Context::oracleRead(MachineId machine, Slot slot) const {
  return engine_->read(machine, slot);
}

Engine::Engine(const MpcConfig& cfg) : cfg_(cfg), cap_(cfg.wordCap()) {
  cfg_.validate();
  trace_.wordCap = cap_;
}

void Engine::touch(MachineId id) {
  auto it = std::lower_bound(seen_.begin(), seen_.end(), id);
  if (it == seen_.end() || *it != id) {
    seen_.insert(it, id);
    trace_.machinesUsed = seen_.size();
  }
}

void Engine::fail(MachineId id, std::size_t words) {
  if (!trace_.failed) trace_.failed = Failure{id, trace_.rounds, words};
}

void Engine::place(const Placement& p) {
  if (failed()) return;
  if (p.machine >= cfg_.machineBudget) {
    throw MachineBudgetExceeded("mpc: machine id " + std::to_string(p.machine) +
                                " exceeds the budget");
  }
  auto& store = stores_[p.machine];
  store[p.slot] = p.words;
  touch(p.machine);
  const auto w = storeWords(store);
  trace_.peakWordsPerMachine = std::max(trace_.peakWordsPerMachine, w);
  if (w > cap_) fail(p.machine, w);
}

bool Engine::step(const RoundFn& fn) {
  if (failed()) return false;
  const auto round = ++trace_.rounds;
  std::vector<MachineId> active;
  for (const auto& [id, store] : stores_) {
    if (!store.empty()) active.push_back(id);
  }
  for (const auto& [id, inbox] : inboxes_) {
    if (!inbox.empty()) active.push_back(id);
  }
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());

  static const std::vector<Message> kEmpty;
  std::vector<std::pair<MachineId, std::vector<std::pair<MachineId, Words>>>> outgoing;
  for (auto id : active) {
    touch(id);
    auto& store = stores_[id];
    auto inIt = inboxes_.find(id);
    const auto& inbox = inIt == inboxes_.end() ? kEmpty : inIt->second;
    const auto before = storeWords(store) + inboxWords(inbox);
    trace_.peakWordsPerMachine = std::max(trace_.peakWordsPerMachine, before);
    if (before > cap_) {
      fail(id, before);
      return false;
    }
    Context ctx(*this, id, round, store, inbox);
    fn(ctx);
    std::size_t out = 0;
    for (const auto& [to, payload] : ctx.outbox_) out += payload.size();
    // Empty slots carry no data.
    std::erase_if(store, [](const auto& kv) { return kv.second.empty(); });
    const auto after = storeWords(store) + out;
    trace_.peakWordsPerMachine = std::max(trace_.peakWordsPerMachine, after);
    if (after > cap_) {
      fail(id, after);
      return false;
    }
    if (!ctx.outbox_.empty()) outgoing.emplace_back(id, std::move(ctx.outbox_));
  }
  inboxes_.clear();
  for (auto& [from, msgs] : outgoing) {
    for (auto& [to, payload] : msgs) {
      ++trace_.totalMessages;
      trace_.totalWords += payload.size();
      touch(to);
      inboxes_[to].push_back({from, std::move(payload)});
    }
  }
  std::erase_if(stores_, [](const auto& kv) { return kv.second.empty(); });
  return true;
}

bool Engine::run(const std::vector<RoundFn>& rounds) {
  for (const auto& fn : rounds) {
    if (!step(fn)) return false;
  }
  return !failed();
}

const Words* Engine::read(MachineId machine, Slot slot) const {
  auto it = stores_.find(machine);
  if (it == stores_.end()) return nullptr;
  auto s = it->second.find(slot);
  return s == it->second.end() ? nullptr : &s->second;
}

RunResult runProgram(const MpcProgram& program, const MpcConfig& cfg) {
  Engine engine(cfg);
  for (const auto& p : program.inputs) engine.place(p);
  engine.run(program.rounds);
  return {engine.stores(), engine.inboxes(), engine.trace()};
}

Tree::Tree(std::vector<MachineId> leaves, std::size_t messageWords, std::size_t cap, IdSpace& ids)
    : leaves_(std::move(leaves)) {
  if (leaves_.empty()) throw std::logic_error("tree over no leaves");
  if (!std::is_sorted(leaves_.begin(), leaves_.end())) {
    throw std::logic_error("tree leaves must be in ascending id order");
  }
  fanIn_ = std::max<std::size_t>(2, cap / std::max<std::size_t>(1, messageWords));
  for (std::size_t i = 0; i < leaves_.size(); ++i) leafIndex_[leaves_[i]] = i;
  std::size_t width = leaves_.size();
  do {
    width = (width + fanIn_ - 1) / fanIn_;
    const auto base = ids.take(width);
    std::vector<MachineId> level(width);
    std::iota(level.begin(), level.end(), base);
    levels_.push_back(std::move(level));
  } while (width > 1);
}

std::size_t Tree::nodeCount() const noexcept {
  std::size_t k = 0;
  for (const auto& l : levels_) k += l.size();
  return k;
}

std::size_t Tree::levelOf(MachineId id) const {
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    if (!levels_[l].empty() && id >= levels_[l].front() && id <= levels_[l].back()) return l + 1;
  }
  return 0;
}

MachineId Tree::parentOf(MachineId id) const {
  const auto lvl = levelOf(id);
  std::size_t index;
  if (lvl == 0) {
    index = leafIndex_.at(id);
  } else {
    if (lvl == levels_.size()) throw std::logic_error("tree root has no parent");
    index = static_cast<std::size_t>(id - levels_[lvl - 1].front());
  }
  return levels_[lvl][index / fanIn_];
}

std::vector<MachineId> Tree::childrenOf(MachineId id) const {
  const auto lvl = levelOf(id);
  if (lvl == 0) return {};
  const auto index = static_cast<std::size_t>(id - levels_[lvl - 1].front());
  const auto& below = lvl == 1 ? leaves_ : levels_[lvl - 2];
  const auto lo = index * fanIn_;
  const auto hi = std::min(below.size(), lo + fanIn_);
  return {below.begin() + static_cast<std::ptrdiff_t>(lo), below.begin() + static_cast<std::ptrdiff_t>(hi)};
}

namespace {

constexpr Slot kTreeSlot = 0xFFFF0001;

}  // namespace

void prefixSumNode(Context& ctx, const Tree& tree, std::size_t width) {
  const auto lvl = tree.levelOf(ctx.id());
  if (lvl == 0) return;
  const bool isRoot = lvl == tree.depth();
  auto sendDown = [&](const Words& childValues, const std::vector<Word>& base,
                      const std::vector<Word>& total) {
    const auto children = tree.childrenOf(ctx.id());
    std::vector<Word> offset = base;
    for (std::size_t c = 0; c < children.size(); ++c) {
      Words msg{kTagDown};
      msg.insert(msg.end(), offset.begin(), offset.end());
      msg.insert(msg.end(), total.begin(), total.end());
      ctx.send(children[c], std::move(msg));
      for (std::size_t k = 0; k < width; ++k) offset[k] += childValues[c * width + k];
    }
  };
  for (const auto& m : ctx.inbox()) {
    if (m.payload.empty()) continue;
    if (m.payload[0] == kTagDown) {
      std::vector<Word> base(m.payload.begin() + 1, m.payload.begin() + 1 + static_cast<std::ptrdiff_t>(width));
      std::vector<Word> total(m.payload.begin() + 1 + static_cast<std::ptrdiff_t>(width), m.payload.end());
      auto values = std::move(ctx.store()[kTreeSlot]);
      ctx.store().erase(kTreeSlot);
      sendDown(values, base, total);
      return;
    }
  }
  // Children that sent nothing count as zero.
  const auto children = tree.childrenOf(ctx.id());
  Words values(children.size() * width, 0);
  bool any = false;
  for (const auto& m : ctx.inbox()) {
    if (m.payload.empty() || m.payload[0] != kTagUp) continue;
    const auto c = static_cast<std::size_t>(
        std::lower_bound(children.begin(), children.end(), m.from) - children.begin());
    if (c == children.size() || children[c] != m.from) continue;
    any = true;
    std::copy(m.payload.begin() + 1, m.payload.begin() + 1 + static_cast<std::ptrdiff_t>(width),
              values.begin() + static_cast<std::ptrdiff_t>(c * width));
  }
  if (!any) return;
  std::vector<Word> sum(width, 0);
  for (std::size_t i = 0; i < values.size(); ++i) sum[i % width] += values[i];
  if (isRoot) {
    sendDown(values, std::vector<Word>(width, 0), sum);
  } else {
    ctx.store()[kTreeSlot] = values;
    Words msg{kTagUp};
    msg.insert(msg.end(), sum.begin(), sum.end());
    ctx.send(tree.parentOf(ctx.id()), std::move(msg));
  }
}

void reduceNode(Context& ctx, const Tree& tree, std::size_t width, Slot into, bool doubles) {
  const auto lvl = tree.levelOf(ctx.id());
  if (lvl == 0) return;
  std::vector<Word> sum(width, doubles ? packDouble(0.0) : 0);
  bool any = false;
  for (const auto& m : ctx.inbox()) {
    if (m.payload.empty() || m.payload[0] != kTagUp) continue;
    any = true;
    for (std::size_t k = 0; k < width; ++k) {
      if (doubles) {
        sum[k] = packDouble(unpackDouble(sum[k]) + unpackDouble(m.payload[1 + k]));
      } else {
        sum[k] += m.payload[1 + k];
      }
    }
  }
  if (!any) return;
  if (lvl == tree.depth()) {
    ctx.store()[into] = Words(sum.begin(), sum.end());
  } else {
    Words msg{kTagUp};
    msg.insert(msg.end(), sum.begin(), sum.end());
    ctx.send(tree.parentOf(ctx.id()), std::move(msg));
  }
}

void gatherNode(Context& ctx, const Tree& tree, Slot into) {
  const auto lvl = tree.levelOf(ctx.id());
  if (lvl == 0) return;
  Words records;
  for (const auto& m : ctx.inbox()) {
    if (m.payload.empty() || m.payload[0] != kTagGather) continue;
    records.insert(records.end(), m.payload.begin() + 1, m.payload.end());
  }
  if (records.empty()) return;
  if (lvl == tree.depth()) {
    ctx.store()[into] = std::move(records);
  } else {
    Words msg{kTagGather};
    msg.insert(msg.end(), records.begin(), records.end());
    ctx.send(tree.parentOf(ctx.id()), std::move(msg));
  }
}

RelayPlan planRelays(std::size_t targets, std::size_t payloadWords, std::size_t cap) {
  RelayPlan plan;
  const auto data = std::max<std::size_t>(1, payloadWords);
  // A relay holds {count, its targets, payload} and emits one payload per target.
  std::size_t per = cap > data + 1 ? std::min(cap - data - 1, cap / data) : 1;
  per = std::max<std::size_t>(1, per);
  plan.perRelay = std::min(per, std::max<std::size_t>(1, targets));
  plan.relays = std::max<std::size_t>(1, (targets + plan.perRelay - 1) / plan.perRelay);
  return plan;
}

void multicast(Context& ctx, const std::vector<MachineId>& targets, const Words& payload,
               MachineId relayBase, const RelayPlan& plan) {
  for (std::size_t r = 0; r < plan.relays; ++r) {
    const auto lo = std::min(targets.size(), r * plan.perRelay);
    const auto hi = std::min(targets.size(), lo + plan.perRelay);
    Words msg{static_cast<Word>(hi - lo)};
    for (auto k = lo; k < hi; ++k) msg.push_back(static_cast<Word>(targets[k]));
    msg.insert(msg.end(), payload.begin(), payload.end());
    ctx.send(relayBase + r, std::move(msg));
  }
}

bool relayForward(Context& ctx) {
  bool any = false;
  for (const auto& m : ctx.inbox()) {
    if (m.payload.empty()) continue;
    any = true;
    const auto count = static_cast<std::size_t>(m.payload[0]);
    const Words data(m.payload.begin() + 1 + static_cast<std::ptrdiff_t>(count), m.payload.end());
    for (std::size_t k = 0; k < count; ++k) {
      ctx.send(static_cast<MachineId>(m.payload[1 + k]), data);
    }
  }
  return any;
}

}  // namespace rankagg::mpc
