#pragma once

#include <initializer_list>
#include <map>

#include "rankagg/mpc.hpp"

namespace rankagg::mpc {

/// Records grouped into one tagged message per destination.
class Batches {
 public:
  explicit Batches(Word tag) : tag_(tag) {}

  void add(MachineId to, std::initializer_list<Word> record) {
    auto& w = out_[to];
    if (w.empty()) w.push_back(tag_);
    w.insert(w.end(), record.begin(), record.end());
  }

  void flush(Context& ctx) {
    for (auto& [to, words] : out_) ctx.send(to, std::move(words));
    out_.clear();
  }

 private:
  Word tag_;
  std::map<MachineId, Words> out_;
};

/// Calls f(record) for every `width`-word record of the messages tagged `tag`.
template <typename F>
void forRecords(const std::vector<Message>& inbox, Word tag, std::size_t width, F&& f) {
  for (const auto& m : inbox) {
    if (m.payload.empty() || m.payload[0] != tag) continue;
    for (std::size_t k = 1; k + width <= m.payload.size(); k += width) f(&m.payload[k]);
  }
}

}  // namespace rankagg::mpc
