#include <algorithm>
#include <numeric>

#include "batches.hpp"
#include "rankagg/mpc/lanes.hpp"

namespace rankagg::mpc {

namespace {

constexpr Slot kContent = 1;
constexpr Slot kText = 1;
constexpr Slot kCounts = 2;
constexpr Slot kUnusedElems = 3;
constexpr Slot kDummyRanks = 4;

constexpr Word kRefs = 40;
constexpr Word kPiece = 41;
constexpr Word kKeys = 42;
constexpr Word kRequests = 43;
constexpr Word kBlockCount = 44;
constexpr Word kContentMsg = 45;
constexpr Word kSummary = 46;
constexpr Word kPlacement = 47;
constexpr Word kFwdEntry = 60;
constexpr Word kInvEntry = 61;
constexpr Word kDummyRank = 62;
constexpr Word kUnusedRank = 63;

std::vector<MachineId> range(MachineId base, std::size_t count) {
  std::vector<MachineId> v(count);
  std::iota(v.begin(), v.end(), base);
  return v;
}

const Message* findTag(const std::vector<Message>& inbox, Word tag) {
  for (const auto& m : inbox) {
    if (!m.payload.empty() && m.payload[0] == tag) return &m;
  }
  return nullptr;
}

}  // namespace

UlamReconstructLane::UlamReconstructLane(const MpcConfig& cfg, IdSpace& ids,
                                         const ReconstructParams& params)
    : cfg_(cfg), params_(params) {
  params_.validate();
  if (params_.epsilon != cfg.epsilon) {
    throw InvalidInput("mpc reconstruct: block epsilon must equal the MPC epsilon");
  }
  grid_ = windowGrid(cfg.n, params_);
  K_ = cfg.blockCount();
  if (grid_.layout.K != K_ || grid_.layout.b != cfg.blockSize()) {
    throw std::logic_error("mpc reconstruct: block layouts disagree");
  }
  begin_ = ids.take(K_);
  windowsBegin_ = ids.used();
  for (std::size_t j = 1; j <= K_; ++j) {
    windowBase_.push_back(windowsBegin_ + windows_.size());
    for (std::size_t c = 0; c < 5; ++c) {
      for (const auto& w : grid_.blocks[j - 1].W) windows_.push_back({j, c, w, false});
      for (const auto& w : grid_.SW) windows_.push_back({j, c, w, true});
    }
  }
  ids.take(windows_.size());
  enumerators_ = ids.take(K_);
  tuples_ = ids.take(K_ * params_.tupleCap);
  dp_ = ids.take(1);
  rendezvous_ = ids.take(K_);
  tree_ = Tree(range(begin_, K_), 2, cfg.wordCap(), ids);
  end_ = ids.used();
}

void UlamReconstructLane::act(Context& ctx, std::size_t round) {
  const auto id = ctx.id();
  auto& st = ctx.store();
  const auto& L = grid_.layout;
  const auto b = static_cast<Word>(L.b);
  const auto cap = params_.tupleCap;
  const auto d = tree_.depth();

  if (tree_.isNode(id)) {
    prefixSumNode(ctx, tree_, 1);
    return;
  }
  if (id < begin_ + K_) {
    blockRound(ctx, round, static_cast<std::size_t>(id - begin_));
    return;
  }

  if (id < enumerators_) {
    const auto& wm = windows_[static_cast<std::size_t>(id - windowsBegin_)];
    if (round == 2) {
      std::vector<std::pair<Word, Words>> pieces;
      for (const auto& m : ctx.inbox()) {
        if (m.payload[0] == kPiece) pieces.push_back({m.payload[1], Words(m.payload.begin() + 2, m.payload.end())});
      }
      std::sort(pieces.begin(), pieces.end());
      std::vector<Element> content;
      for (const auto& [s, words] : pieces) content.insert(content.end(), words.begin(), words.end());
      const auto* refs = findTag(ctx.inbox(), kRefs);
      Words msg{kKeys, static_cast<Word>(wm.coord), wm.degenerate, wm.w.s, wm.w.e};
      for (std::size_t k = 2; k < refs->payload.size();) {
        const auto len = static_cast<std::size_t>(refs->payload[k]);
        const std::vector<Element> ref(refs->payload.begin() + static_cast<std::ptrdiff_t>(k + 1),
                                       refs->payload.begin() + static_cast<std::ptrdiff_t>(k + 1 + len));
        msg.push_back(rankKey(contentIndel(ref, content), wm.w, L, wm.block));
        k += 1 + len;
      }
      ctx.send(enumerators_ + wm.block - 1, std::move(msg));
      if (!content.empty()) st[kContent] = Words(content.begin(), content.end());
    } else if (round == 4) {
      Words msg{kContentMsg, static_cast<Word>(wm.coord), wm.w.s, wm.w.e};
      if (auto it = st.find(kContent); it != st.end()) msg.insert(msg.end(), it->second.begin(), it->second.end());
      st.clear();
      forRecords(ctx.inbox(), kRequests, 1, [&](const Word* a) {
        ctx.send(tuples_ + (wm.block - 1) * cap + static_cast<std::size_t>(*a), msg);
      });
    }
    return;
  }

  if (id < tuples_) {
    if (round != 3) return;
    const auto j = static_cast<std::size_t>(id - enumerators_) + 1;
    std::vector<RankedLists> perReference;
    for (const auto& m : ctx.inbox()) {
      if (m.payload[0] != kKeys) continue;
      const auto c = static_cast<std::size_t>(m.payload[1]);
      const bool degenerate = m.payload[2] != 0;
      const Window w{static_cast<std::int32_t>(m.payload[3]), static_cast<std::int32_t>(m.payload[4])};
      const auto refs = m.payload.size() - 5;
      if (perReference.size() < refs) perReference.resize(refs);
      for (std::size_t r = 0; r < refs; ++r) {
        (degenerate ? perReference[r].SW : perReference[r].W)[c].push_back({w, m.payload[5 + r]});
      }
    }
    for (auto& lists : perReference) sortRanked(lists);
    bool truncated = false;
    const auto tuples = enumerateTuples(std::move(perReference), cap, &truncated);
    // Window machine of (block j, coordinate c, window w).
    auto machineOf = [&](std::size_t c, const Window& w) {
      const auto perCoord = grid_.blocks[j - 1].W.size() + grid_.SW.size();
      const auto base = windowBase_[j - 1] + c * perCoord;
      const auto& W = grid_.blocks[j - 1].W;
      if (w.e > w.s) {
        return base + static_cast<std::size_t>(std::find(W.begin(), W.end(), w) - W.begin());
      }
      const auto it = std::lower_bound(grid_.SW.begin(), grid_.SW.end(), w);
      return base + W.size() + static_cast<std::size_t>(it - grid_.SW.begin());
    };
    Batches requests(kRequests);
    for (std::size_t a = 0; a < tuples.size(); ++a) {
      for (std::size_t c = 0; c < 5; ++c) requests.add(machineOf(c, tuples[a][c]), {static_cast<Word>(a)});
    }
    requests.flush(ctx);
    ctx.send(dp_, {kBlockCount, static_cast<Word>(j), static_cast<Word>(tuples.size()), truncated});
    return;
  }

  if (id < dp_) {
    const auto slot = static_cast<std::size_t>(id - tuples_);
    const auto j = slot / cap + 1;
    const auto a = slot % cap;
    if (round == 5) {
      std::array<Words, 5> content;
      std::array<Window, 5> windows;
      for (const auto& m : ctx.inbox()) {
        if (m.payload[0] != kContentMsg) continue;
        const auto c = static_cast<std::size_t>(m.payload[1]);
        windows[c] = {static_cast<std::int32_t>(m.payload[2]), static_cast<std::int32_t>(m.payload[3])};
        content[c].assign(m.payload.begin() + 4, m.payload.end());
      }
      std::array<std::vector<Element>, 5> lines;
      std::array<std::span<const Element>, 5> group;
      for (std::size_t c = 0; c < 5; ++c) {
        lines[c].assign(content[c].begin(), content[c].end());
        group[c] = lines[c];
      }
      const auto text = blockReconstruction(group, L.b);
      Word objective = 0;
      for (std::size_t c = 0; c < 5; ++c) objective += contentIndel(text, lines[c]);
      Words summary{kSummary, static_cast<Word>(j), static_cast<Word>(a), objective};
      for (const auto& w : windows) {
        summary.push_back(w.s);
        summary.push_back(w.e);
      }
      summary.push_back(static_cast<Word>(text.size()));
      summary.push_back(static_cast<Word>(std::count(text.begin(), text.end(), kDummy)));
      ctx.send(dp_, std::move(summary));
      st[kText] = Words(text.begin(), text.end());
    } else if (round == 7) {
      const auto* plan = findTag(ctx.inbox(), kPlacement);
      if (plan) {
        Word pos = plan->payload[1];
        Word drop = plan->payload[2];
        Word rank = plan->payload[3];
        Batches fwd(kFwdEntry), inv(kInvEntry), dummies(kDummyRank);
        for (auto x : st.at(kText)) {
          if (x == kDummy && drop > 0) {
            --drop;
            continue;
          }
          ++pos;
          if (x == kDummy) {
            dummies.add(rendezvous_ + static_cast<MachineId>(rank / b), {rank, pos});
            ++rank;
          } else {
            fwd.add(begin_ + cfg_.blockOf(static_cast<std::size_t>(pos)), {pos, x});
            inv.add(begin_ + cfg_.blockOf(static_cast<std::size_t>(x)), {x, pos});
          }
        }
        fwd.flush(ctx);
        inv.flush(ctx);
        dummies.flush(ctx);
      }
      st.clear();
    }
    return;
  }

  if (id == dp_) {
    if (round == 4) {
      Words counts(2 * K_, 0);
      forRecords(ctx.inbox(), kBlockCount, 3, [&](const Word* r) {
        counts[2 * static_cast<std::size_t>(r[0] - 1)] = r[1];
        counts[2 * static_cast<std::size_t>(r[0] - 1) + 1] = r[2];
      });
      st[kCounts] = std::move(counts);
      return;
    }
    if (round != 6) return;
    std::size_t held = storeWords(st);
    for (const auto& m : ctx.inbox()) held += m.payload.size();
    const auto& counts = st.at(kCounts);
    // Texts stay on the tuple machines; the composition only needs windows
    // and objectives.
    std::vector<std::vector<CandidateBlock>> C(K_);
    std::vector<std::vector<std::pair<Word, Word>>> shape(K_);  // (length, dummies)
    for (std::size_t j = 0; j < K_; ++j) {
      C[j].resize(static_cast<std::size_t>(counts[2 * j]));
      shape[j].resize(C[j].size());
    }
    forRecords(ctx.inbox(), kSummary, 15, [&](const Word* r) {
      const auto j = static_cast<std::size_t>(r[0]);
      const auto a = static_cast<std::size_t>(r[1]);
      auto& cb = C[j - 1][a];
      cb.block = j;
      cb.objective = r[2];
      for (std::size_t c = 0; c < 5; ++c) {
        cb.windows[c] = {static_cast<std::int32_t>(r[3 + 2 * c]), static_cast<std::int32_t>(r[4 + 2 * c])};
      }
      shape[j - 1][a] = {r[13], r[14]};
    });
    const auto comp = composeChoices(C, L);

    // Lengths and dummies per block of the intermediate string.
    std::vector<std::size_t> chosenIndex(K_, cap);
    for (const auto& ch : comp.chosen) chosenIndex[ch.block - 1] = ch.index;
    Word total = 0;
    for (std::size_t j = 0; j < K_; ++j) {
      total += chosenIndex[j] == cap ? b : shape[j][chosenIndex[j]].first;
    }
    Word drop = total - static_cast<Word>(L.n);
    Word pos = 0;
    Word rank = 0;
    for (std::size_t j = 0; j < K_; ++j) {
      const bool chosen = chosenIndex[j] != cap;
      const Word len = chosen ? shape[j][chosenIndex[j]].first : b;
      const Word dummies = chosen ? shape[j][chosenIndex[j]].second : b;
      const Word here = std::min(drop, dummies);
      const MachineId target = chosen ? tuples_ + j * cap + chosenIndex[j] : begin_ + j;
      ctx.send(target, {kPlacement, pos, here, rank});
      drop -= here;
      pos += len - here;
      rank += dummies - here;
    }
    if (drop > 0) throw std::logic_error("mpc reconstruct: too few dummies to drop");

    Words result{comp.blockEd, static_cast<Word>(comp.chosen.size())};
    for (const auto& ch : comp.chosen) {
      result.push_back(static_cast<Word>(ch.block));
      result.push_back(static_cast<Word>(ch.index));
    }
    result.insert(result.end(), counts.begin(), counts.end());
    result.push_back(static_cast<Word>(held));
    st.clear();
    st[kResultSlot] = std::move(result);
    return;
  }

  // Rendezvous machines pair dummy ranks with unused-element ranks.
  if (round == 8) {
    Words ranks;
    forRecords(ctx.inbox(), kDummyRank, 2, [&](const Word* r) {
      ranks.push_back(r[0]);
      ranks.push_back(r[1]);
    });
    st[kDummyRanks] = std::move(ranks);
  } else if (round == 9 + 2 * d) {
    std::map<Word, Word> elem;
    forRecords(ctx.inbox(), kUnusedRank, 2, [&](const Word* r) { elem[r[0]] = r[1]; });
    Batches fwd(kFwdEntry), inv(kInvEntry);
    const auto& ranks = st.at(kDummyRanks);
    for (std::size_t k = 0; k < ranks.size(); k += 2) {
      const auto x = elem.at(ranks[k]);
      const auto pos = ranks[k + 1];
      fwd.add(begin_ + cfg_.blockOf(static_cast<std::size_t>(pos)), {pos, x});
      inv.add(begin_ + cfg_.blockOf(static_cast<std::size_t>(x)), {x, pos});
    }
    st.clear();
    fwd.flush(ctx);
    inv.flush(ctx);
  }
}

void UlamReconstructLane::blockRound(Context& ctx, std::size_t round, std::size_t i) {
  auto& st = ctx.store();
  const auto& L = grid_.layout;
  const auto b = static_cast<Word>(L.b);
  const auto d = tree_.depth();
  const auto start = static_cast<Word>(cfg_.blockStart(i));
  const auto len = cfg_.blockLength(i);
  auto absorb = [&] {
    auto& f = st[kOutFwd];
    auto& v = st[kOutInv];
    forRecords(ctx.inbox(), kFwdEntry, 2, [&](const Word* r) { f[static_cast<std::size_t>(r[0] - start)] = r[1]; });
    forRecords(ctx.inbox(), kInvEntry, 2, [&](const Word* r) { v[static_cast<std::size_t>(r[0] - start)] = r[1]; });
  };

  if (round == 1) {
    std::array<std::vector<Element>, 5> own;
    std::array<std::span<const Element>, 5> spans;
    for (std::size_t c = 0; c < 5; ++c) {
      const auto& w = st.at(fwdSlot(c));
      own[c].assign(w.begin(), w.end());
      spans[c] = own[c];
    }
    Words refs{kRefs, 0};
    for (const auto& ref : referenceTexts(spans, L.b)) {
      refs.push_back(static_cast<Word>(ref.size()));
      refs.insert(refs.end(), ref.begin(), ref.end());
      ++refs[1];
    }
    const auto j = i + 1;
    const auto end = static_cast<Word>(start + static_cast<Word>(len));
    for (std::size_t k = 0; k < windows_.size(); ++k) {
      const auto& wm = windows_[k];
      const auto target = windowsBegin_ + k;
      if (wm.block == j) ctx.send(target, refs);
      const Word lo = std::max<Word>(wm.w.s, start);
      const Word hi = std::min<Word>(wm.w.e, end);
      if (lo >= hi) continue;
      Words piece{kPiece, lo};
      for (Word p = lo; p < hi; ++p) piece.push_back(own[wm.coord][static_cast<std::size_t>(p - start)]);
      ctx.send(target, std::move(piece));
    }
    st.clear();
    // Keeps the machine live until its output arrives.
    st[kOutFwd] = Words(len, 0);
    st[kOutInv] = Words(len, 0);
  } else if (round == 7) {
    // Unchosen block: b dummies, the first `drop` of them removed.
    const auto* plan = findTag(ctx.inbox(), kPlacement);
    if (!plan) return;
    Word pos = plan->payload[1];
    Word rank = plan->payload[3];
    Batches dummies(kDummyRank);
    for (Word k = plan->payload[2]; k < b; ++k) {
      ++pos;
      dummies.add(rendezvous_ + static_cast<MachineId>(rank / b), {rank, pos});
      ++rank;
    }
    dummies.flush(ctx);
  } else if (round == 8) {
    absorb();
    Words unused;
    const auto& v = st[kOutInv];
    for (std::size_t k = 0; k < len; ++k) {
      if (v[k] == 0) unused.push_back(start + static_cast<Word>(k));
    }
    ctx.send(tree_.parentOf(ctx.id()), {kTagUp, static_cast<Word>(unused.size())});
    st[kUnusedElems] = std::move(unused);
  } else if (round == 8 + 2 * d) {
    const auto* down = findTag(ctx.inbox(), kTagDown);
    if (!down) throw std::logic_error("mpc reconstruct: missing prefix offsets");
    Batches out(kUnusedRank);
    const auto& unused = st[kUnusedElems];
    for (std::size_t k = 0; k < unused.size(); ++k) {
      const Word r = down->payload[1] + static_cast<Word>(k);
      out.add(rendezvous_ + static_cast<MachineId>(r / b), {r, unused[k]});
    }
    st.erase(kUnusedElems);
    out.flush(ctx);
  } else if (round == 10 + 2 * d) {
    absorb();
  }
}

}  // namespace rankagg::mpc
