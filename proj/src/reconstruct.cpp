#include "rankagg/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "rankagg/lis.hpp"
#include "rankagg/tournament.hpp"

namespace rankagg {
namespace {

constexpr double kFuzz = 1e-9;

std::int64_t ceilFuzzy(double x) { return static_cast<std::int64_t>(std::ceil(x - kFuzz)); }
std::int64_t floorFuzzy(double x) { return static_cast<std::int64_t>(std::floor(x + kFuzz)); }

std::int64_t deviation(const Window& w, std::int32_t start, std::int32_t len) {
  return std::abs(w.s - start) + std::abs(w.size() - len);
}

}  // namespace

void ReconstructParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0,1)");
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  if (tupleCap == 0) throw InvalidInput("tuple cap must be at least 1");
}

std::int32_t BlockLayout::length(std::size_t j) const {
  const auto l = static_cast<std::int64_t>(start(j));
  return static_cast<std::int32_t>(
      std::min<std::int64_t>(static_cast<std::int64_t>(b), static_cast<std::int64_t>(n) + 1 - l));
}

BlockLayout blockLayout(std::size_t n, const ReconstructParams& params) {
  params.validate();
  if (n == 0) throw InvalidInput("n must be at least 1");
  BlockLayout L;
  L.n = n;
  L.nEps = std::pow(static_cast<double>(n), params.epsilon);
  const auto K0 = static_cast<std::size_t>(std::max<std::int64_t>(1, ceilFuzzy(L.nEps)));
  L.b = (n + K0 - 1) / K0;
  // With b fixed, ceil(n/b) blocks cover [n] and none is empty.
  L.K = (n + L.b - 1) / L.b;
  return L;
}

WindowGrid windowGrid(std::size_t n, const ReconstructParams& params) {
  WindowGrid grid;
  grid.layout = blockLayout(n, params);
  const auto& L = grid.layout;
  const double base = 1.0 + params.rho;
  const auto topScale = ceilFuzzy(std::log(2.0 * static_cast<double>(n)) / std::log(base));
  const auto last = static_cast<std::int64_t>(n) + 1;
  std::set<Window> swAll;
  grid.blocks.resize(L.K);
  for (std::size_t j = 1; j <= L.K; ++j) {
    const std::int64_t l = L.start(j);
    const std::int64_t bj = L.length(j);
    std::set<Window> W;
    std::set<Window> SW;
    for (std::int64_t t = 0; t <= topScale; ++t) {
      const double d = std::pow(base, static_cast<double>(t));
      const auto g = std::max<std::int64_t>(1, floorFuzzy(params.rho * d / L.nEps));
      const auto lo = std::max<std::int64_t>(1, ceilFuzzy(static_cast<double>(l) - d));
      const auto hi = std::min<std::int64_t>(last, floorFuzzy(static_cast<double>(l) + d));
      // End offsets relative to s + b_j.
      std::vector<std::int64_t> offsets{0};
      const double upLimit = std::min(static_cast<double>(bj) / params.rho, d);
      if (upLimit >= 1.0 - kFuzz) {
        const auto aMax = floorFuzzy(std::log(upLimit) / std::log(base));
        for (std::int64_t a = 0; a <= aMax; ++a) {
          offsets.push_back(floorFuzzy(std::pow(base, static_cast<double>(a))));
        }
      }
      const double downArg = static_cast<double>(bj) - params.rho * static_cast<double>(bj);
      if (downArg > 0.0) {
        const auto aMax = ceilFuzzy(std::log(downArg) / std::log(base));
        for (std::int64_t a = 0; a <= aMax; ++a) {
          offsets.push_back(-floorFuzzy(std::pow(base, static_cast<double>(a))));
        }
      }
      for (std::int64_t s = ((lo + g - 1) / g) * g; s <= hi; s += g) {
        SW.insert({static_cast<std::int32_t>(s), static_cast<std::int32_t>(s)});
        for (auto off : offsets) {
          const auto e = std::min(last, s + bj + off);
          if (e > s) W.insert({static_cast<std::int32_t>(s), static_cast<std::int32_t>(e)});
        }
      }
    }
    auto& bw = grid.blocks[j - 1];
    bw.W.assign(W.begin(), W.end());
    const auto lj = static_cast<std::int32_t>(l);
    const auto lenj = static_cast<std::int32_t>(bj);
    std::stable_sort(bw.W.begin(), bw.W.end(), [&](const Window& x, const Window& y) {
      return deviation(x, lj, lenj) < deviation(y, lj, lenj);
    });
    bw.SW.assign(SW.begin(), SW.end());
    swAll.insert(SW.begin(), SW.end());
  }
  grid.SW.assign(swAll.begin(), swAll.end());
  return grid;
}

std::vector<std::vector<Element>> referenceTexts(
    const std::array<std::span<const Element>, 5>& ownLines, std::size_t b) {
  std::vector<std::vector<Element>> refs;
  auto add = [&](std::vector<Element> t) {
    if (std::find(refs.begin(), refs.end(), t) == refs.end()) refs.push_back(std::move(t));
  };
  add(blockReconstruction(ownLines, b));
  for (const auto& line : ownLines) add({line.begin(), line.end()});
  return refs;
}

std::vector<std::vector<Element>> referenceTexts(const Instance& Q, const WindowGrid& grid,
                                                 std::size_t j) {
  const auto& L = grid.layout;
  std::array<std::span<const Element>, 5> own;
  for (std::size_t i = 0; i < 5; ++i) {
    own[i] = Q.perms[i].oneLine().subspan(static_cast<std::size_t>(L.start(j) - 1),
                                          static_cast<std::size_t>(L.length(j)));
  }
  return referenceTexts(own, L.b);
}

std::int64_t rankKey(std::int64_t indel, const Window& w, const BlockLayout& layout,
                     std::size_t j) {
  // Deviation never reaches the scale, so it only separates equal indel values.
  const auto scale = 4 * static_cast<std::int64_t>(layout.n + 2);
  return indel * scale + deviation(w, layout.start(j), layout.length(j));
}

void sortRanked(RankedLists& lists) {
  auto byKey = [](const RankedWindow& x, const RankedWindow& y) {
    if (x.key != y.key) return x.key < y.key;
    return x.w < y.w;
  };
  for (std::size_t i = 0; i < 5; ++i) {
    std::sort(lists.W[i].begin(), lists.W[i].end(), byKey);
    std::sort(lists.SW[i].begin(), lists.SW[i].end(), byKey);
  }
}

RankedLists rankWindows(const Instance& Q, const WindowGrid& grid, std::size_t j,
                        std::span<const Element> reference) {
  RankedLists lists;
  for (std::size_t i = 0; i < 5; ++i) {
    for (const auto& w : grid.blocks[j - 1].W) {
      lists.W[i].push_back({w, rankKey(blockIndel(reference, Q.perms[i], w), w, grid.layout, j)});
    }
    for (const auto& w : grid.SW) {
      lists.SW[i].push_back({w, rankKey(blockIndel(reference, Q.perms[i], w), w, grid.layout, j)});
    }
  }
  sortRanked(lists);
  return lists;
}

std::vector<WindowTuple> enumerateTuples(std::vector<RankedLists> perReference, std::size_t cap,
                                         bool* truncated) {
  std::vector<TupleEnumerator> its;
  for (auto& lists : perReference) its.emplace_back(std::move(lists), cap);
  std::set<WindowTuple> seen;
  std::vector<WindowTuple> out;
  bool live = true;
  while (live && out.size() < cap) {
    live = false;
    for (auto& it : its) {
      if (out.size() == cap) break;
      WindowTuple t;
      while (it.next(t)) {
        if (seen.insert(t).second) {
          out.push_back(t);
          break;
        }
      }
      live = live || !it.exhausted();
    }
  }
  if (truncated) {
    *truncated = std::any_of(its.begin(), its.end(),
                             [](const TupleEnumerator& it) { return !it.exhausted(); });
  }
  return out;
}

const std::vector<RankedWindow>& TupleEnumerator::list(const Node& node, std::size_t c) const {
  return node.family == c + 1 ? lists_.SW[c] : lists_.W[c];
}

TupleEnumerator::TupleEnumerator(RankedLists lists, std::size_t cap)
    : lists_(std::move(lists)), cap_(cap) {
  for (std::uint8_t f = 0; f <= 5; ++f) {
    Node root{0, f, {}, 0};
    bool empty = false;
    for (std::size_t c = 0; c < 5 && !empty; ++c) {
      const auto& l = list(root, c);
      empty = l.empty();
      if (!empty) root.sum += l[0].key;
    }
    if (!empty) heap_.push_back(root);
  }
  std::make_heap(heap_.begin(), heap_.end(), Later{});
}

bool TupleEnumerator::next(WindowTuple& out) {
  if (heap_.empty()) return false;
  if (produced_ == cap_) {
    truncated_ = true;
    heap_.clear();
    return false;
  }
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  const Node node = heap_.back();
  heap_.pop_back();
  // Each tuple has one parent: the tuple with its last nonzero rank lowered.
  for (std::size_t c = node.pivot; c < 5; ++c) {
    const auto& l = list(node, c);
    if (node.idx[c] + 1 >= l.size()) continue;
    Node child = node;
    ++child.idx[c];
    child.sum += l[child.idx[c]].key - l[node.idx[c]].key;
    child.pivot = static_cast<std::uint8_t>(c);
    heap_.push_back(child);
    std::push_heap(heap_.begin(), heap_.end(), Later{});
  }
  for (std::size_t c = 0; c < 5; ++c) out[c] = list(node, c)[node.idx[c]].w;
  ++produced_;
  return true;
}

std::vector<Element> blockReconstruction(const std::array<std::span<const Element>, 5>& group,
                                         std::size_t b) {
  std::vector<Element> all;
  for (const auto& s : group) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  std::vector<Element> V;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t k = i;
    while (k < all.size() && all[k] == all[i]) ++k;
    if (all[i] != kDummy && k - i >= 4) V.push_back(all[i]);
    i = k;
  }
  const auto k = V.size();
  // pos[i][v]: index of V[v] inside string i, or -1.
  std::array<std::vector<std::int32_t>, 5> pos;
  for (std::size_t i = 0; i < 5; ++i) {
    pos[i].assign(k, -1);
    for (std::size_t t = 0; t < group[i].size(); ++t) {
      auto it = std::lower_bound(V.begin(), V.end(), group[i][t]);
      if (it != V.end() && *it == group[i][t]) {
        pos[i][static_cast<std::size_t>(it - V.begin())] = static_cast<std::int32_t>(t);
      }
    }
  }
  Digraph g(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = a + 1; c < k; ++c) {
      int ac = 0;
      int ca = 0;
      for (std::size_t i = 0; i < 5; ++i) {
        if (pos[i][a] < 0 || pos[i][c] < 0) continue;
        (pos[i][a] < pos[i][c] ? ac : ca) += 1;
      }
      if (ac > ca) g.addEdge(a, c);
      if (ca > ac) g.addEdge(c, a);
    }
  }
  std::vector<bool> alive(k, true);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = a + 1; c < k && alive[a]; ++c) {
      if (alive[c] && !g.connected(a, c)) {
        alive[a] = false;
        alive[c] = false;
      }
    }
  }
  removeTriangles(g, alive);
  std::vector<Element> text;
  for (auto v : topologicalOrder(g, alive)) text.push_back(V[v]);
  if (text.size() < b) text.resize(b, kDummy);
  return text;
}

std::int64_t contentIndel(std::span<const Element> text, std::span<const Element> content) {
  std::vector<std::pair<Element, std::int32_t>> index;
  index.reserve(content.size());
  for (std::size_t t = 0; t < content.size(); ++t) {
    index.push_back({content[t], static_cast<std::int32_t>(t)});
  }
  std::sort(index.begin(), index.end());
  std::vector<std::int32_t> seq;
  seq.reserve(text.size());
  for (auto x : text) {
    if (x == kDummy) continue;
    auto it = std::lower_bound(index.begin(), index.end(), std::pair<Element, std::int32_t>{x, -1});
    if (it != index.end() && it->first == x) seq.push_back(it->second);
  }
  const auto lcs = static_cast<std::int64_t>(longestIncreasingLength(seq));
  return static_cast<std::int64_t>(text.size()) + static_cast<std::int64_t>(content.size()) - 2 * lcs;
}

std::span<const Element> windowContent(const Permutation& p, const Window& w) {
  return p.oneLine().subspan(static_cast<std::size_t>(w.s - 1), static_cast<std::size_t>(w.size()));
}

std::int64_t blockIndel(std::span<const Element> text, const Permutation& p, const Window& w) {
  return contentIndel(text, windowContent(p, w));
}

CandidateBlock makeCandidate(const Instance& Q, std::size_t j, const WindowTuple& windows,
                             std::size_t b) {
  std::array<std::span<const Element>, 5> group;
  for (std::size_t i = 0; i < 5; ++i) group[i] = windowContent(Q.perms[i], windows[i]);
  CandidateBlock c{j, blockReconstruction(group, b), windows, 0};
  for (std::size_t i = 0; i < 5; ++i) c.objective += blockIndel(c.text, Q.perms[i], windows[i]);
  return c;
}

namespace {

std::int64_t sumStarts(const WindowTuple& w) {
  std::int64_t s = 0;
  for (const auto& x : w) s += x.s;
  return s;
}
std::int64_t sumEnds(const WindowTuple& w) {
  std::int64_t s = 0;
  for (const auto& x : w) s += x.e;
  return s;
}

}  // namespace

CompositionResult composeChoices(const std::vector<std::vector<CandidateBlock>>& C,
                                 const BlockLayout& layout) {
  const auto K = static_cast<std::int64_t>(layout.K);
  const auto b = static_cast<std::int64_t>(layout.b);
  const auto n = static_cast<std::int64_t>(layout.n);
  if (C.size() != layout.K) throw std::logic_error("composeBlocks: one candidate set per block");

  struct Prev {
    std::int64_t key;
    std::size_t h;
    std::size_t idx;
  };
  // Predecessors sorted by (key, h, idx). The first valid entry is the one
  // the sequential update rule would settle on.
  std::vector<Prev> prev;
  std::vector<std::vector<std::int64_t>> D(C.size());
  std::vector<std::vector<Choice>> P(C.size());
  const Choice none{0, 0};

  for (std::size_t j = 1; j <= C.size(); ++j) {
    const auto& Cj = C[j - 1];
    D[j - 1].resize(Cj.size());
    P[j - 1].assign(Cj.size(), none);
    const auto jj = static_cast<std::int64_t>(j);
    for (std::size_t a = 0; a < Cj.size(); ++a) {
      const auto& wa = Cj[a].windows;
      std::int64_t best = -5;  // fresh start: sum of (s_i - 1)
      for (const auto& pr : prev) {
        if (pr.key >= best) break;
        const auto& wb = C[pr.h - 1][pr.idx].windows;
        bool ok = true;
        for (std::size_t i = 0; i < 5 && ok; ++i) ok = wb[i].e <= wa[i].s;
        if (ok) {
          best = pr.key;
          P[j - 1][a] = {pr.h, pr.idx};
          break;
        }
      }
      D[j - 1][a] = best + sumStarts(wa) + 5 * (jj - 1) * b + Cj[a].objective;
    }
    std::vector<Prev> fresh;
    fresh.reserve(Cj.size());
    for (std::size_t a = 0; a < Cj.size(); ++a) {
      fresh.push_back({D[j - 1][a] - sumEnds(Cj[a].windows) - 5 * jj * b, j, a});
    }
    auto less = [](const Prev& x, const Prev& y) {
      if (x.key != y.key) return x.key < y.key;
      if (x.h != y.h) return x.h < y.h;
      return x.idx < y.idx;
    };
    std::sort(fresh.begin(), fresh.end(), less);
    std::vector<Prev> merged;
    merged.reserve(prev.size() + fresh.size());
    std::merge(prev.begin(), prev.end(), fresh.begin(), fresh.end(), std::back_inserter(merged),
               less);
    prev = std::move(merged);
  }

  CompositionResult out;
  out.blockEd = 5 * (K * b + n);
  Choice last = none;
  bool found = false;
  for (std::size_t j = 1; j <= C.size(); ++j) {
    const auto jj = static_cast<std::int64_t>(j);
    for (std::size_t a = 0; a < C[j - 1].size(); ++a) {
      const auto total = D[j - 1][a] + 5 * (n + 1) - sumEnds(C[j - 1][a].windows) + 5 * (K - jj) * b;
      if (!found || total < out.blockEd) {
        found = true;
        out.blockEd = total;
        last = {j, a};
      }
    }
  }
  if (found) {
    for (Choice c = last; c.block != 0; c = P[c.block - 1][c.index]) out.chosen.push_back(c);
    std::reverse(out.chosen.begin(), out.chosen.end());
  }
  return out;
}

CompositionResult composeBlocks(const std::vector<std::vector<CandidateBlock>>& C,
                                const BlockLayout& layout) {
  auto out = composeChoices(C, layout);
  std::size_t t = 0;
  for (std::size_t j = 1; j <= C.size(); ++j) {
    if (t < out.chosen.size() && out.chosen[t].block == j) {
      const auto& text = C[j - 1][out.chosen[t].index].text;
      out.intermediate.insert(out.intermediate.end(), text.begin(), text.end());
      ++t;
    } else {
      out.intermediate.insert(out.intermediate.end(), layout.b, kDummy);
    }
  }
  return out;
}

bool isValidSequence(const std::vector<std::vector<CandidateBlock>>& C,
                     const std::vector<Choice>& sequence) {
  for (std::size_t t = 0; t + 1 < sequence.size(); ++t) {
    const auto& x = sequence[t];
    const auto& y = sequence[t + 1];
    if (x.block >= y.block) return false;
    const auto& wx = C[x.block - 1][x.index].windows;
    const auto& wy = C[y.block - 1][y.index].windows;
    for (std::size_t i = 0; i < 5; ++i) {
      if (wx[i].e > wy[i].s) return false;
    }
  }
  return true;
}

std::int64_t blockEdOf(const std::vector<std::vector<CandidateBlock>>& C,
                       const std::vector<Choice>& sequence, const BlockLayout& layout) {
  const auto K = static_cast<std::int64_t>(layout.K);
  const auto b = static_cast<std::int64_t>(layout.b);
  const auto n = static_cast<std::int64_t>(layout.n);
  if (sequence.empty()) return 5 * (K * b + n);
  std::int64_t total = 0;
  for (const auto& c : sequence) total += C[c.block - 1][c.index].objective;
  const auto& first = C[sequence.front().block - 1][sequence.front().index];
  for (const auto& w : first.windows) {
    total += (static_cast<std::int64_t>(first.block) - 1) * b + w.s - 1;
  }
  for (std::size_t t = 0; t + 1 < sequence.size(); ++t) {
    const auto& x = C[sequence[t].block - 1][sequence[t].index];
    const auto& y = C[sequence[t + 1].block - 1][sequence[t + 1].index];
    total += 5 * (static_cast<std::int64_t>(y.block) - static_cast<std::int64_t>(x.block) - 1) * b;
    for (std::size_t i = 0; i < 5; ++i) total += y.windows[i].s - x.windows[i].e;
  }
  const auto& last = C[sequence.back().block - 1][sequence.back().index];
  for (const auto& w : last.windows) {
    total += (K - static_cast<std::int64_t>(last.block)) * b + n + 1 - w.e;
  }
  return total;
}

Permutation postprocess(std::span<const Element> intermediate, std::size_t n) {
  if (intermediate.size() < n) {
    throw std::logic_error("postprocess: intermediate string shorter than n");
  }
  std::vector<bool> used(n + 1, false);
  std::size_t dummies = 0;
  for (auto x : intermediate) {
    if (x == kDummy) {
      ++dummies;
      continue;
    }
    if (x < 1 || static_cast<std::size_t>(x) > n || used[static_cast<std::size_t>(x)]) {
      throw std::logic_error("postprocess: invalid or repeated element " + std::to_string(x));
    }
    used[static_cast<std::size_t>(x)] = true;
  }
  auto drop = intermediate.size() - n;
  if (dummies < drop) throw std::logic_error("postprocess: too few dummies to drop");
  std::vector<Element> out;
  out.reserve(n);
  for (auto x : intermediate) {
    if (x == kDummy && drop > 0) {
      --drop;
      continue;
    }
    out.push_back(x);
  }
  Element next = 1;
  for (auto& x : out) {
    if (x != kDummy) continue;
    while (used[static_cast<std::size_t>(next)]) ++next;
    x = next;
    used[static_cast<std::size_t>(next)] = true;
  }
  return Permutation(std::move(out));
}

std::vector<std::vector<CandidateBlock>> buildCandidateSets(const Instance& Q,
                                                            const WindowGrid& grid,
                                                            std::size_t tupleCap,
                                                            std::vector<bool>* truncated) {
  const auto& L = grid.layout;
  std::vector<std::vector<CandidateBlock>> C(L.K);
  if (truncated) truncated->assign(L.K, false);
  for (std::size_t j = 1; j <= L.K; ++j) {
    std::vector<RankedLists> perReference;
    for (const auto& ref : referenceTexts(Q, grid, j)) {
      perReference.push_back(rankWindows(Q, grid, j, ref));
    }
    bool cut = false;
    for (const auto& t : enumerateTuples(std::move(perReference), tupleCap, &cut)) {
      C[j - 1].push_back(makeCandidate(Q, j, t, L.b));
    }
    if (truncated) (*truncated)[j - 1] = cut;
  }
  return C;
}

ReconstructResult scalableMedianReconstruct(const Instance& Q, const ReconstructParams& params) {
  if (Q.m() != 5) {
    throw InvalidInput("scalableMedianReconstruct requires exactly 5 permutations, got " +
                       std::to_string(Q.m()));
  }
  const auto grid = windowGrid(Q.n, params);
  std::vector<bool> truncated;
  const auto C = buildCandidateSets(Q, grid, params.tupleCap, &truncated);
  auto composition = composeBlocks(C, grid.layout);
  std::vector<std::size_t> counts;
  for (const auto& c : C) counts.push_back(c.size());
  auto output = postprocess(composition.intermediate, Q.n);
  return {std::move(output), std::move(composition), std::move(counts), std::move(truncated),
          grid.layout};
}

}  // namespace rankagg
