#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "batches.hpp"
#include "rankagg/mpc/lanes.hpp"
#include "rankagg/tournament.hpp"

namespace rankagg::mpc {

namespace {

// Output entries: (position, element) for the position's owner and
// (element, position) for the element's owner.
constexpr Word kFwdEntry = 60;
constexpr Word kInvEntry = 61;

std::vector<MachineId> range(MachineId base, std::size_t count) {
  std::vector<MachineId> v(count);
  std::iota(v.begin(), v.end(), base);
  return v;
}

void emitPlacement(Batches& fwd, Batches& inv, const MpcConfig& cfg, MachineId base, Word pos,
                   Word x) {
  fwd.add(base + cfg.blockOf(static_cast<std::size_t>(pos)), {pos, x});
  inv.add(base + cfg.blockOf(static_cast<std::size_t>(x)), {x, pos});
}

void writeOutput(Context& ctx, const MpcConfig& cfg, std::size_t i) {
  auto& st = ctx.store();
  const auto start = static_cast<Word>(cfg.blockStart(i));
  auto& f = st[kOutFwd];
  auto& v = st[kOutInv];
  f.resize(cfg.blockLength(i), 0);
  v.resize(cfg.blockLength(i), 0);
  forRecords(ctx.inbox(), kFwdEntry, 2, [&](const Word* r) { f[static_cast<std::size_t>(r[0] - start)] = r[1]; });
  forRecords(ctx.inbox(), kInvEntry, 2, [&](const Word* r) { v[static_cast<std::size_t>(r[0] - start)] = r[1]; });
}

const Message* findTag(const std::vector<Message>& inbox, Word tag) {
  for (const auto& m : inbox) {
    if (!m.payload.empty() && m.payload[0] == tag) return &m;
  }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------- Hamming

namespace {
constexpr Slot kFree = 2;
constexpr Slot kUnused = 3;
constexpr Word kFreeRank = 10;
constexpr Word kUnusedRank = 11;
}  // namespace

HammingMedianLane::HammingMedianLane(const MpcConfig& cfg, IdSpace& ids)
    : cfg_(cfg), K_(cfg.blockCount()) {
  begin_ = ids.take(K_);
  rendezvous_ = ids.take(K_);
  tree_ = Tree(range(begin_, K_), 3, cfg.wordCap(), ids);
  end_ = ids.used();
}

void HammingMedianLane::act(Context& ctx, std::size_t round) {
  const auto id = ctx.id();
  const auto d = tree_.depth();
  if (tree_.isNode(id)) {
    prefixSumNode(ctx, tree_, 2);
    return;
  }
  const auto b = static_cast<Word>(cfg_.blockSize());
  if (id >= rendezvous_) {
    if (round != 2 + 2 * d) return;
    std::map<Word, Word> pos, elem;
    forRecords(ctx.inbox(), kFreeRank, 2, [&](const Word* r) { pos[r[0]] = r[1]; });
    forRecords(ctx.inbox(), kUnusedRank, 2, [&](const Word* r) { elem[r[0]] = r[1]; });
    Batches fwd(kFwdEntry), inv(kInvEntry);
    for (const auto& [rank, p] : pos) emitPlacement(fwd, inv, cfg_, begin_, p, elem.at(rank));
    fwd.flush(ctx);
    inv.flush(ctx);
    return;
  }
  const auto i = static_cast<std::size_t>(id - begin_);
  auto& st = ctx.store();
  if (round == 1) {
    const auto start = static_cast<Word>(cfg_.blockStart(i));
    const auto len = cfg_.blockLength(i);
    Words out(len, 0), outInv(len, 0), freePos, unused;
    for (std::size_t k = 0; k < len; ++k) {
      const Word a = st[fwdSlot(0)][k], bb = st[fwdSlot(1)][k], c = st[fwdSlot(2)][k];
      if (a == bb || a == c) {
        out[k] = a;
      } else if (bb == c) {
        out[k] = bb;
      } else {
        freePos.push_back(start + static_cast<Word>(k));
      }
      // Element start+k is placed iff two of its positions agree.
      const Word pa = st[invSlot(0)][k], pb = st[invSlot(1)][k], pc = st[invSlot(2)][k];
      if (pa == pb || pa == pc) {
        outInv[k] = pa;
      } else if (pb == pc) {
        outInv[k] = pb;
      } else {
        unused.push_back(start + static_cast<Word>(k));
      }
    }
    st.clear();
    ctx.send(tree_.parentOf(id),
             {kTagUp, static_cast<Word>(freePos.size()), static_cast<Word>(unused.size())});
    st[kOutFwd] = std::move(out);
    st[kOutInv] = std::move(outInv);
    st[kFree] = std::move(freePos);
    st[kUnused] = std::move(unused);
  } else if (round == 1 + 2 * d) {
    const auto* down = findTag(ctx.inbox(), kTagDown);
    if (!down) throw std::logic_error("hamming lane: missing prefix offsets");
    const Word of = down->payload[1], ou = down->payload[2];
    Batches sends(kFreeRank), sendu(kUnusedRank);
    const auto& fp = st[kFree];
    const auto& un = st[kUnused];
    for (std::size_t k = 0; k < fp.size(); ++k) {
      const Word r = of + static_cast<Word>(k);
      sends.add(rendezvous_ + static_cast<MachineId>(r / b), {r, fp[k]});
    }
    for (std::size_t k = 0; k < un.size(); ++k) {
      const Word r = ou + static_cast<Word>(k);
      sendu.add(rendezvous_ + static_cast<MachineId>(r / b), {r, un[k]});
    }
    st.erase(kFree);
    st.erase(kUnused);
    sends.flush(ctx);
    sendu.flush(ctx);
  } else if (round == 3 + 2 * d) {
    writeOutput(ctx, cfg_, i);
  }
}

// ---------------------------------------------------------------- footrule

namespace {
constexpr Slot kSorted = 2;
constexpr Word kMedianPair = 20;
}  // namespace

FootruleMedianLane::FootruleMedianLane(const MpcConfig& cfg, IdSpace& ids)
    : cfg_(cfg), K_(cfg.blockCount()) {
  begin_ = ids.take(K_);
  buckets_ = ids.take(K_);
  tree_ = Tree(range(buckets_, K_), 2, cfg.wordCap(), ids);
  end_ = ids.used();
}

void FootruleMedianLane::act(Context& ctx, std::size_t round) {
  const auto id = ctx.id();
  const auto d = tree_.depth();
  if (tree_.isNode(id)) {
    prefixSumNode(ctx, tree_, 1);
    return;
  }
  auto& st = ctx.store();
  if (id >= buckets_) {
    if (round == 2) {
      std::vector<std::pair<Word, Word>> pairs;
      forRecords(ctx.inbox(), kMedianPair, 2, [&](const Word* r) { pairs.push_back({r[0], r[1]}); });
      std::sort(pairs.begin(), pairs.end());
      Words positions;
      for (const auto& [z, k] : pairs) positions.push_back(k);
      ctx.send(tree_.parentOf(id), {kTagUp, static_cast<Word>(positions.size())});
      st[kSorted] = std::move(positions);
    } else if (round == 2 + 2 * d) {
      const auto* down = findTag(ctx.inbox(), kTagDown);
      if (!down) throw std::logic_error("footrule lane: missing prefix offsets");
      Batches fwd(kFwdEntry), inv(kInvEntry);
      const auto& positions = st[kSorted];
      for (std::size_t r = 0; r < positions.size(); ++r) {
        emitPlacement(fwd, inv, cfg_, begin_, positions[r], down->payload[1] + static_cast<Word>(r) + 1);
      }
      st.clear();
      fwd.flush(ctx);
      inv.flush(ctx);
    }
    return;
  }
  const auto i = static_cast<std::size_t>(id - begin_);
  if (round == 1) {
    const auto start = static_cast<Word>(cfg_.blockStart(i));
    Batches out(kMedianPair);
    for (std::size_t k = 0; k < cfg_.blockLength(i); ++k) {
      std::array<Word, 3> v{st[fwdSlot(0)][k], st[fwdSlot(1)][k], st[fwdSlot(2)][k]};
      std::sort(v.begin(), v.end());
      out.add(buckets_ + cfg_.blockOf(static_cast<std::size_t>(v[1])), {v[1], start + static_cast<Word>(k)});
    }
    st.clear();
    out.flush(ctx);
  } else if (round == 3 + 2 * d) {
    writeOutput(ctx, cfg_, i);
  }
}

// ---------------------------------------------------------------- Kendall

namespace {
constexpr Slot kOrder = 2;
constexpr Word kPivotInfo = 30;
constexpr Word kPivotTree = 31;
constexpr Word kElementRecord = 32;
constexpr Word kPivotRecord = 33;
constexpr std::size_t kNodeWords = 7;  // x, three positions, left, right, in-order index

bool beats(const Word* u, const Word* v) {
  int votes = 0;
  for (int k = 0; k < 3; ++k) votes += u[k] < v[k];
  return votes >= 2;
}
}  // namespace

std::size_t KendallMedianLane::pivotCount(const MpcConfig& cfg) {
  const auto n = cfg.n;
  const auto lg = static_cast<std::size_t>(std::ceil(8.0 * std::log2(static_cast<double>(std::max<std::size_t>(n, 2)))));
  auto t = std::max<std::size_t>(1, std::min({lg, cfg.blockSize(), n}));
  // The coordinator has to fit t pivot records in and the tree out to every relay.
  const auto cap = cfg.wordCap();
  auto cost = [&](std::size_t t) {
    const auto data = 2 + kNodeWords * t;
    const auto plan = planRelays(cfg.blockCount(), data, cap);
    return std::max(5 * t, plan.relays * (data + plan.perRelay + 1));
  };
  while (t > 1 && cost(t) > cap) --t;
  return t;
}

KendallMedianLane::KendallMedianLane(const MpcConfig& cfg, IdSpace& ids, std::uint64_t seed)
    : cfg_(cfg), K_(cfg.blockCount()), seed_(seed), t_(pivotCount(cfg)) {
  // The t lowest priorities; every machine can stream over 1..n to find them.
  std::vector<Element> all(cfg.n);
  std::iota(all.begin(), all.end(), 1);
  auto lower = [&](Element a, Element b) {
    const auto pa = pivotPriority(seed_, a), pb = pivotPriority(seed_, b);
    return pa != pb ? pa < pb : a < b;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(t_), all.end(), lower);
  pivots_.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(t_));

  begin_ = ids.take(K_);
  coordinator_ = ids.take(1);
  plan_ = planRelays(K_, 2 + kNodeWords * t_, cfg.wordCap());
  relays_ = ids.take(plan_.relays);
  buckets_ = ids.take(t_ + 1);
  tree_ = Tree(range(buckets_, t_ + 1), 2, cfg.wordCap(), ids);
  end_ = ids.used();
}

void KendallMedianLane::act(Context& ctx, std::size_t round) {
  const auto id = ctx.id();
  const auto d = tree_.depth();
  auto& st = ctx.store();
  if (tree_.isNode(id)) {
    prefixSumNode(ctx, tree_, 1);
    return;
  }
  if (id == coordinator_) {
    if (round != 2) return;
    std::map<Word, std::array<Word, 3>> pos;
    forRecords(ctx.inbox(), kPivotInfo, 4, [&](const Word* r) { pos[r[0]] = {r[1], r[2], r[3]}; });
    // Recursion of KWIK-SORT restricted to the pivots; leaves are buckets.
    Words nodes;
    Word gaps = 0;
    std::function<Word(std::vector<Element>)> build = [&](std::vector<Element> group) -> Word {
      if (group.empty()) return -(gaps++) - 1;
      // pivots_ is in priority order, so the first member present is the pivot.
      Element pivot = 0;
      for (auto p : pivots_) {
        if (std::find(group.begin(), group.end(), p) != group.end()) {
          pivot = p;
          break;
        }
      }
      const auto& pp = pos.at(pivot);
      std::vector<Element> left, right;
      for (auto v : group) {
        if (v == pivot) continue;
        (beats(pos.at(v).data(), pp.data()) ? left : right).push_back(v);
      }
      const auto self = static_cast<Word>(nodes.size() / kNodeWords);
      nodes.insert(nodes.end(), {pivot, pp[0], pp[1], pp[2], 0, 0, 0});
      const auto l = build(std::move(left));
      nodes[static_cast<std::size_t>(self) * kNodeWords + 6] = gaps - 1;
      const auto r = build(std::move(right));
      nodes[static_cast<std::size_t>(self) * kNodeWords + 4] = l;
      nodes[static_cast<std::size_t>(self) * kNodeWords + 5] = r;
      return self;
    };
    build(pivots_);
    Words payload{kPivotTree, static_cast<Word>(t_)};
    payload.insert(payload.end(), nodes.begin(), nodes.end());
    multicast(ctx, range(begin_, K_), payload, relays_, plan_);
    return;
  }
  if (id >= relays_ && id < relays_ + plan_.relays) {
    if (round == 3) relayForward(ctx);
    return;
  }
  if (id >= buckets_) {
    if (round == 5) {
      std::map<Word, std::array<Word, 3>> pos;
      Word pivot = 0;
      forRecords(ctx.inbox(), kElementRecord, 4, [&](const Word* r) { pos[r[0]] = {r[1], r[2], r[3]}; });
      forRecords(ctx.inbox(), kPivotRecord, 1, [&](const Word* r) { pivot = r[0]; });
      std::vector<Element> group;
      for (const auto& [x, p] : pos) group.push_back(static_cast<Element>(x));
      auto order = kwikSort(std::move(group), seed_, [&](Element u, Element v) {
        return beats(pos.at(u).data(), pos.at(v).data());
      });
      Words out(order.begin(), order.end());
      if (pivot != 0) out.push_back(pivot);
      ctx.send(tree_.parentOf(id), {kTagUp, static_cast<Word>(out.size())});
      st[kOrder] = std::move(out);
    } else if (round == 5 + 2 * d) {
      const auto* down = findTag(ctx.inbox(), kTagDown);
      if (!down) throw std::logic_error("kendall lane: missing prefix offsets");
      Batches fwd(kFwdEntry), inv(kInvEntry);
      const auto& order = st[kOrder];
      for (std::size_t r = 0; r < order.size(); ++r) {
        emitPlacement(fwd, inv, cfg_, begin_, down->payload[1] + static_cast<Word>(r) + 1, order[r]);
      }
      st.clear();
      fwd.flush(ctx);
      inv.flush(ctx);
    }
    return;
  }
  const auto i = static_cast<std::size_t>(id - begin_);
  const auto start = static_cast<Word>(cfg_.blockStart(i));
  if (round == 1) {
    for (std::size_t k = 0; k < 3; ++k) st.erase(fwdSlot(k));
    Batches out(kPivotInfo);
    for (std::size_t k = 0; k < cfg_.blockLength(i); ++k) {
      const auto x = start + static_cast<Word>(k);
      if (std::find(pivots_.begin(), pivots_.end(), x) == pivots_.end()) continue;
      out.add(coordinator_, {x, st[invSlot(0)][k], st[invSlot(1)][k], st[invSlot(2)][k]});
    }
    out.flush(ctx);
  } else if (round == 4) {
    const auto* msg = findTag(ctx.inbox(), kPivotTree);
    if (!msg) throw std::logic_error("kendall lane: missing pivot tree");
    const Word* nodes = msg->payload.data() + 2;
    Batches elems(kElementRecord), pivs(kPivotRecord);
    for (std::size_t k = 0; k < cfg_.blockLength(i); ++k) {
      const auto x = start + static_cast<Word>(k);
      const Word p[3] = {st[invSlot(0)][k], st[invSlot(1)][k], st[invSlot(2)][k]};
      Word node = 0;
      while (node >= 0) {
        const Word* nd = nodes + node * static_cast<Word>(kNodeWords);
        if (nd[0] == x) break;
        node = beats(p, nd + 1) ? nd[4] : nd[5];
      }
      if (node >= 0) {
        pivs.add(buckets_ + static_cast<MachineId>(nodes[node * static_cast<Word>(kNodeWords) + 6]), {x});
      } else {
        elems.add(buckets_ + static_cast<MachineId>(-node - 1), {x, p[0], p[1], p[2]});
      }
    }
    st.clear();
    elems.flush(ctx);
    pivs.flush(ctx);
  } else if (round == 6 + 2 * d) {
    writeOutput(ctx, cfg_, i);
  }
}

}  // namespace rankagg::mpc
