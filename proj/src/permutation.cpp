#include "rankagg/permutation.hpp"

#include <numeric>
#include <sstream>

namespace rankagg {

Permutation::Permutation(std::vector<Element> oneLine)
    : forward_(std::move(oneLine)), inverse_(forward_.size() + 1, 0) {
  if (forward_.empty()) throw InvalidInput("permutation must have n >= 1");
  const auto n = forward_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Element e = forward_[i];
    if (e < 1 || static_cast<std::size_t>(e) > n) {
      throw InvalidInput("element " + std::to_string(e) + " outside 1.." +
                         std::to_string(n));
    }
    if (inverse_[static_cast<std::size_t>(e)] != 0) {
      throw InvalidInput("element " + std::to_string(e) + " repeated");
    }
    inverse_[static_cast<std::size_t>(e)] = static_cast<std::int32_t>(i + 1);
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<Element> v(n);
  std::iota(v.begin(), v.end(), 1);
  return Permutation(std::move(v));
}

Permutation Permutation::reversed(std::size_t n) {
  std::vector<Element> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Element>(n - i);
  return Permutation(std::move(v));
}

std::string Permutation::toString() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    if (i) os << ' ';
    os << forward_[i];
  }
  return os.str();
}

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
  for (double x : w_) {
    if (!(x >= 0.0)) throw InvalidInput("weights must be nonnegative");
    total_ += x;
  }
}

WeightVector WeightVector::uniform(std::size_t n, double value) {
  return WeightVector(std::vector<double>(n, value));
}

Instance::Instance(std::vector<Permutation> ps, std::optional<WeightVector> w)
    : perms(std::move(ps)), weights(std::move(w)) {
  if (perms.empty()) throw InvalidInput("instance needs at least one permutation");
  n = perms.front().size();
  for (const auto& p : perms) {
    if (p.size() != n) throw InvalidInput("permutations differ in length");
  }
  if (weights && weights->size() != n) {
    throw InvalidInput("weight vector length differs from n");
  }
}

Instance Instance::subset(std::span<const std::size_t> indices) const {
  std::vector<Permutation> ps;
  ps.reserve(indices.size());
  for (auto i : indices) ps.push_back(perms.at(i));
  return Instance(std::move(ps), weights);
}

void requireSameSize(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) {
    throw InvalidInput("dimension mismatch: " + std::to_string(p.size()) +
                       " vs " + std::to_string(q.size()));
  }
}

}  // namespace rankagg
