#include <algorithm>

#include "rankagg/mpc/lanes.hpp"

namespace rankagg::mpc {

Words blockSlice(std::span<const Element> values, const MpcConfig& cfg, std::size_t i) {
  const auto s = cfg.blockStart(i) - 1;
  const auto len = cfg.blockLength(i);
  return Words(values.begin() + static_cast<std::ptrdiff_t>(s),
               values.begin() + static_cast<std::ptrdiff_t>(s + len));
}

std::vector<Placement> distributePermutation(const Permutation& p, const MpcConfig& cfg,
                                             std::size_t k, MachineId base) {
  if (p.size() != cfg.n) throw InvalidInput("mpc: permutation size differs from n");
  std::vector<Placement> out;
  const auto inv = p.inverse().subspan(1);
  for (std::size_t i = 0; i < cfg.blockCount(); ++i) {
    out.push_back({base + i, fwdSlot(k), blockSlice(p.oneLine(), cfg, i)});
    out.push_back({base + i, invSlot(k), blockSlice(inv, cfg, i)});
  }
  return out;
}

std::vector<Placement> distributeWeights(const WeightVector& w, const MpcConfig& cfg,
                                         MachineId base) {
  if (w.size() != cfg.n) throw InvalidInput("mpc: weight vector size differs from n");
  std::vector<Placement> out;
  for (std::size_t i = 0; i < cfg.blockCount(); ++i) {
    Words words;
    const auto s = cfg.blockStart(i);
    for (std::size_t x = s; x < s + cfg.blockLength(i); ++x) {
      words.push_back(packDouble(w[static_cast<Element>(x)]));
    }
    out.push_back({base + i, kWeightSlot, std::move(words)});
  }
  return out;
}

Permutation reassemble(const std::map<MachineId, Store>& stores, const MpcConfig& cfg,
                       MachineId base, Slot fwd) {
  std::vector<Element> line;
  line.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.blockCount(); ++i) {
    auto it = stores.find(base + i);
    if (it == stores.end() || !it->second.count(fwd)) {
      throw std::logic_error("mpc: block " + std::to_string(i) + " holds no output");
    }
    for (auto v : it->second.at(fwd)) line.push_back(static_cast<Element>(v));
  }
  return Permutation(std::move(line));
}

}  // namespace rankagg::mpc
