#include "rankagg/tournament.hpp"

#include <algorithm>
#include <bit>

#include "rankagg/rng.hpp"

namespace rankagg {

Digraph::Digraph(std::size_t k)
    : k_(k), words_((k + 63) / 64), out_(k * words_, 0), in_(k * words_, 0) {}

Digraph majorityTournament(const Instance& Q) {
  const auto n = Q.n;
  Digraph g(n);
  const auto voters = static_cast<int>(Q.m());
  for (std::size_t a = 1; a <= n; ++a) {
    for (std::size_t b = a + 1; b <= n; ++b) {
      int aFirst = 0;
      for (const auto& p : Q.perms) {
        aFirst += p.positionOf(static_cast<Element>(a)) < p.positionOf(static_cast<Element>(b));
      }
      const int bFirst = voters - aFirst;
      if (aFirst > bFirst) {
        g.addEdge(a - 1, b - 1);
      } else if (bFirst > aFirst) {
        g.addEdge(b - 1, a - 1);
      }
    }
  }
  return g;
}

namespace {

// First c > b with bit set in x & y & alive, or k if none.
std::size_t firstCommonAbove(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                             const std::vector<std::uint64_t>& alive, std::size_t b,
                             std::size_t k) {
  const std::size_t start = b + 1;
  if (start >= k) return k;
  for (std::size_t w = start / 64; w < alive.size(); ++w) {
    std::uint64_t bits = x[w] & y[w] & alive[w];
    if (w == start / 64) bits &= ~std::uint64_t{0} << (start % 64);
    if (bits) return w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
  }
  return k;
}

}  // namespace

std::vector<std::size_t> removeTriangles(const Digraph& g, std::vector<bool>& alive,
                                         std::span<const double> weights) {
  const auto k = g.size();
  std::vector<std::uint64_t> aliveBits(g.words(), 0);
  for (std::size_t v = 0; v < k; ++v) {
    if (alive[v]) aliveBits[v / 64] |= std::uint64_t{1} << (v % 64);
  }
  std::vector<double> residual(weights.begin(), weights.end());
  std::vector<std::size_t> removed;
  auto kill = [&](std::size_t v) {
    alive[v] = false;
    aliveBits[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    removed.push_back(v);
  };

  // Removing vertices only deletes triangles, so the lexicographically first
  // remaining triangle never precedes the previous one; the scan resumes.
  std::size_t a = 0;
  std::size_t b = 1;
  while (a < k) {
    if (!alive[a]) {
      ++a;
      b = a + 1;
      continue;
    }
    if (b >= k) {
      ++a;
      b = a + 1;
      continue;
    }
    if (!alive[b]) {
      ++b;
      continue;
    }
    std::size_t c = k;
    if (g.hasEdge(a, b)) {
      c = firstCommonAbove(g.outRow(b), g.inRow(a), aliveBits, b, k);
    } else if (g.hasEdge(b, a)) {
      c = firstCommonAbove(g.outRow(a), g.inRow(b), aliveBits, b, k);
    }
    if (c == k) {
      ++b;
      continue;
    }
    if (residual.empty()) {
      kill(a);
      kill(b);
      kill(c);
    } else {
      const double cut = std::min({residual[a], residual[b], residual[c]});
      for (auto v : {a, b, c}) {
        residual[v] -= cut;
        if (residual[v] <= 0.0) kill(v);
      }
    }
  }
  return removed;
}

std::vector<std::size_t> topologicalOrder(const Digraph& g, const std::vector<bool>& alive) {
  std::vector<std::uint64_t> aliveBits(g.words(), 0);
  std::vector<std::size_t> vs;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (alive[v]) {
      aliveBits[v / 64] |= std::uint64_t{1} << (v % 64);
      vs.push_back(v);
    }
  }
  std::vector<std::size_t> wins(g.size(), 0);
  for (auto v : vs) {
    auto row = g.outRow(v);
    std::size_t c = 0;
    for (std::size_t w = 0; w < row.size(); ++w) c += std::popcount(row[w] & aliveBits[w]);
    wins[v] = c;
  }
  std::stable_sort(vs.begin(), vs.end(),
                   [&](std::size_t x, std::size_t y) { return wins[x] > wins[y]; });
  return vs;
}

std::uint64_t pivotPriority(std::uint64_t seed, Element e) noexcept {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(e));
}

}  // namespace rankagg
