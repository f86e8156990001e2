#include <algorithm>
#include <cmath>
#include <set>

#include "rankagg/mpc/lanes.hpp"

namespace rankagg::mpc {

namespace {

constexpr Slot kRowSlot = 1;

bool integral(Metric m) {
  return m == Metric::Hamming || m == Metric::Footrule || m == Metric::Kendall;
}

bool isUlam(Metric m) { return m == Metric::Ulam || m == Metric::WeightedUlam; }
bool isKendall(Metric m) { return m == Metric::Kendall || m == Metric::WeightedKendall; }

std::vector<MachineId> range(MachineId base, std::size_t count) {
  std::vector<MachineId> v(count);
  for (std::size_t k = 0; k < count; ++k) v[k] = base + k;
  return v;
}

}  // namespace

DistanceLane::DistanceLane(Metric metric, const MpcConfig& cfg, IdSpace& ids)
    : metric_(metric), cfg_(cfg), K_(cfg.blockCount()), cap_(cfg.wordCap()) {
  begin_ = ids.take(K_);
  if (isUlam(metric)) {
    rounds_ = 2;
    result_ = begin_;
  } else if (isKendall(metric)) {
    pairBase_ = ids.take(K_ * K_);
    tree_ = Tree(range(pairBase_, K_ * K_), 2, cap_, ids);
    const std::size_t per = isWeighted(metric) ? 3 : 2;
    const std::size_t data = 1 + per * cfg.blockSize();
    // A relay keeps its own copy and sends one per target, row and column.
    relayGroup_ = std::max<std::size_t>(1, cap_ > data ? (cap_ - data) / (2 * data) : 1);
    rounds_ = 3 + tree_.depth();
    result_ = tree_.root();
  } else {
    tree_ = Tree(range(begin_, K_), 2, cap_, ids);
    rounds_ = 1 + tree_.depth();
    result_ = tree_.root();
  }
  end_ = ids.used();
}

std::size_t DistanceLane::kendallMachineCount(const MpcConfig& cfg, bool weighted) {
  IdSpace ids;
  return DistanceLane(weighted ? Metric::WeightedKendall : Metric::Kendall, cfg, ids).end();
}

double DistanceLane::decode(Word w) const {
  return integral(metric_) ? static_cast<double>(w) : unpackDouble(w);
}

void DistanceLane::act(Context& ctx, std::size_t round) {
  if (isUlam(metric_)) {
    ulamOracle(ctx, round);
  } else if (isKendall(metric_)) {
    kendall(ctx, round);
  } else if (round == 1) {
    localSum(ctx);
  } else {
    reduceNode(ctx, tree_, 1, kResultSlot, !integral(metric_));
  }
}

void DistanceLane::localSum(Context& ctx) {
  if (ctx.id() >= begin_ + K_) return;
  auto& st = ctx.store();
  Word v = 0;
  if (metric_ == Metric::Hamming) {
    const auto& p = st.at(fwdSlot(0));
    const auto& q = st.at(fwdSlot(1));
    for (std::size_t k = 0; k < p.size(); ++k) v += p[k] != q[k];
  } else if (metric_ == Metric::Footrule) {
    const auto& p = st.at(fwdSlot(0));
    const auto& q = st.at(fwdSlot(1));
    for (std::size_t k = 0; k < p.size(); ++k) v += p[k] > q[k] ? p[k] - q[k] : q[k] - p[k];
  } else {
    // A mismatch at position k costs (w(p_k) + w(q_k)) / 2, so element x
    // costs w(x) exactly when it sits at different positions.
    const auto& p = st.at(invSlot(0));
    const auto& q = st.at(invSlot(1));
    const auto& w = st.at(kWeightSlot);
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] != q[k]) sum += unpackDouble(w[k]);
    }
    v = packDouble(sum);
  }
  st.clear();
  ctx.send(tree_.parentOf(ctx.id()), {kTagUp, v});
}

void DistanceLane::kendall(Context& ctx, std::size_t round) {
  const auto id = ctx.id();
  const bool weighted = metric_ == Metric::WeightedKendall;
  const std::size_t per = weighted ? 3 : 2;
  if (id < begin_ + K_) {
    if (round != 1) return;
    const auto i = static_cast<std::size_t>(id - begin_);
    auto& st = ctx.store();
    const auto& p = st.at(invSlot(0));
    const auto& q = st.at(invSlot(1));
    Words data{static_cast<Word>(i)};
    for (std::size_t k = 0; k < p.size(); ++k) {
      data.push_back(p[k]);
      data.push_back(q[k]);
      if (weighted) data.push_back(st.at(kWeightSlot)[k]);
    }
    st.clear();
    for (std::size_t j = 0; j < K_; j += relayGroup_) ctx.send(pairBase_ + i * K_ + j, data);
    return;
  }
  if (tree_.isNode(id)) {
    reduceNode(ctx, tree_, 1, kResultSlot, weighted);
    return;
  }
  const auto self = static_cast<std::size_t>(id - pairBase_);
  const auto row = self / K_;
  const auto col = self % K_;
  if (round == 2) {
    for (const auto& m : ctx.inbox()) {
      if (m.from >= begin_ + K_) continue;
      std::set<MachineId> targets;
      for (std::size_t u = 0; u < relayGroup_ && col + u < K_; ++u) {
        targets.insert(pairBase_ + row * K_ + col + u);
        targets.insert(pairBase_ + (col + u) * K_ + row);
      }
      for (auto t : targets) {
        if (t == id) {
          ctx.store()[kRowSlot] = m.payload;
        } else {
          ctx.send(t, m.payload);
        }
      }
    }
    return;
  }
  if (round != 3) return;
  const Words* a = nullptr;
  const Words* b = nullptr;
  auto take = [&](const Words& d) {
    if (static_cast<std::size_t>(d[0]) == row) a = &d;
    if (static_cast<std::size_t>(d[0]) == col) b = &d;
  };
  if (auto it = ctx.store().find(kRowSlot); it != ctx.store().end()) take(it->second);
  for (const auto& m : ctx.inbox()) take(m.payload);
  if (!a || !b) throw std::logic_error("kendall lane: block data missing");
  Word count = 0;
  double sum = 0.0;
  auto pair = [&](const Words& x, std::size_t u, const Words& y, std::size_t v) {
    const auto dp = x[1 + per * u] - y[1 + per * v];
    const auto dq = x[2 + per * u] - y[2 + per * v];
    if ((dp < 0) != (dq < 0)) {
      ++count;
      if (weighted) sum += (unpackDouble(x[3 + per * u]) + unpackDouble(y[3 + per * v])) / 2.0;
    }
  };
  const auto na = (a->size() - 1) / per;
  const auto nb = (b->size() - 1) / per;
  if (row == col) {
    for (std::size_t u = 0; u < na; ++u) {
      for (std::size_t v = u + 1; v < na; ++v) pair(*a, u, *a, v);
    }
  } else if (row < col) {
    for (std::size_t u = 0; u < na; ++u) {
      for (std::size_t v = 0; v < nb; ++v) pair(*a, u, *b, v);
    }
  }
  ctx.store().clear();
  ctx.send(tree_.parentOf(id), {kTagUp, weighted ? packDouble(sum) : count});
}

void DistanceLane::ulamOracle(Context& ctx, std::size_t round) {
  if (ctx.id() != begin_) {
    if (round == 2) ctx.store().clear();
    return;
  }
  if (round != 1) return;
  const auto n = cfg_.n;
  std::vector<Element> p, q;
  std::vector<double> w;
  for (std::size_t i = 0; i < K_; ++i) {
    for (auto v : *ctx.oracleRead(begin_ + i, fwdSlot(0))) p.push_back(static_cast<Element>(v));
    for (auto v : *ctx.oracleRead(begin_ + i, fwdSlot(1))) q.push_back(static_cast<Element>(v));
    if (metric_ == Metric::WeightedUlam) {
      for (auto v : *ctx.oracleRead(begin_ + i, kWeightSlot)) w.push_back(unpackDouble(v));
    }
  }
  const double lg = std::max(1.0, std::ceil(std::log2(static_cast<double>(n))));
  ctx.oracle("ulam-distance", std::pow(static_cast<double>(n), 1.0 + cfg_.epsilon) * lg);
  double d;
  if (metric_ == Metric::WeightedUlam) {
    const WeightVector wv(std::move(w));
    d = distance(metric_, Permutation(std::move(p)), Permutation(std::move(q)), &wv);
  } else {
    d = distance(metric_, Permutation(std::move(p)), Permutation(std::move(q)));
  }
  ctx.store().clear();
  ctx.store()[kResultSlot] = {packDouble(d)};
}

}  // namespace rankagg::mpc
