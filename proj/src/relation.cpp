#include "colexidx/relation.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace colexidx {

Relation::Relation(std::size_t n) : n_(n), stride_((n + 63) / 64), bits_(n * stride_, 0) {}

Relation Relation::identity(std::size_t n) {
  Relation rel(n);
  for (State u = 0; u < n; ++u) rel.set(u, u);
  return rel;
}

void Relation::merge_row(State dst, State src) {
  std::uint64_t* d = bits_.data() + dst * stride_;
  const std::uint64_t* s = bits_.data() + src * stride_;
  for (std::size_t w = 0; w < stride_; ++w) d[w] |= s[w];
}

std::size_t Relation::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t Relation::count_strict() const {
  std::size_t total = count();
  for (State u = 0; u < n_; ++u)
    if (test(u, u)) --total;
  return total;
}

std::vector<std::pair<State, State>> Relation::pairs(bool include_diagonal) const {
  std::vector<std::pair<State, State>> out;
  for (State u = 0; u < n_; ++u)
    for (State v : successors(u)) out.emplace_back(u, v);
  if (include_diagonal) {
    for (State u = 0; u < n_; ++u)
      if (test(u, u)) out.emplace_back(u, u);
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::vector<State> Relation::successors(State u) const {
  std::vector<State> out;
  auto r = row(u);
  for (std::size_t w = 0; w < stride_; ++w) {
    std::uint64_t word = r[w];
    while (word) {
      State v = static_cast<State>(w * 64 + std::countr_zero(word));
      word &= word - 1;
      if (v != u) out.push_back(v);
    }
  }
  return out;
}

bool Relation::is_reflexive() const {
  for (State u = 0; u < n_; ++u)
    if (!test(u, u)) return false;
  return true;
}

bool Relation::is_antisymmetric() const {
  for (State u = 0; u < n_; ++u)
    for (State v : successors(u))
      if (test(v, u)) return false;
  return true;
}

bool Relation::is_transitive() const {
  for (State u = 0; u < n_; ++u) {
    auto ru = row(u);
    for (State v = 0; v < n_; ++v) {
      if (!test(u, v)) continue;
      auto rv = row(v);
      for (std::size_t w = 0; w < stride_; ++w)
        if (rv[w] & ~ru[w]) return false;
    }
  }
  return true;
}

PartialOrder::PartialOrder(Relation rel) : rel_(std::move(rel)) {
  if (!rel_.is_reflexive() || !rel_.is_antisymmetric() || !rel_.is_transitive())
    throw std::invalid_argument("relation is not a partial order");
}

std::optional<PartialOrder> PartialOrder::certify(Relation rel) {
  if (!rel.is_reflexive() || !rel.is_antisymmetric() || !rel.is_transitive())
    return std::nullopt;
  return PartialOrder(std::move(rel), Unchecked{});
}

}  // namespace colexidx
