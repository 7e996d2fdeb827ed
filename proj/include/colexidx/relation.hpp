#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "colexidx/automaton.hpp"

namespace colexidx {

/// Dense boolean matrix over state pairs, one bit-row per state.
/// Diagonal bits are ordinary entries; closures decide whether to set them.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n);

  static Relation identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return stride_; }

  bool test(State u, State v) const {
    return (bits_[u * stride_ + (v >> 6)] >> (v & 63)) & 1u;
  }
  void set(State u, State v) { bits_[u * stride_ + (v >> 6)] |= std::uint64_t{1} << (v & 63); }
  void reset(State u, State v) {
    bits_[u * stride_ + (v >> 6)] &= ~(std::uint64_t{1} << (v & 63));
  }

  std::span<const std::uint64_t> row(State u) const {
    return {bits_.data() + u * stride_, stride_};
  }
  std::span<std::uint64_t> row(State u) { return {bits_.data() + u * stride_, stride_}; }
  /// row(dst) |= row(src)
  void merge_row(State dst, State src);

  std::size_t count() const;
  std::size_t count_strict() const;
  bool empty() const { return count() == 0; }
  /// Pairs sorted by (u, v).
  std::vector<std::pair<State, State>> pairs(bool include_diagonal = false) const;
  /// Successors of u (excluding u), ascending.
  std::vector<State> successors(State u) const;

  bool is_reflexive() const;
  bool is_antisymmetric() const;  // ignores the diagonal
  bool is_transitive() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// A Relation certified reflexive, antisymmetric and transitive.
class PartialOrder {
 public:
  /// Throws std::invalid_argument when `rel` is not a partial order.
  explicit PartialOrder(Relation rel);
  static std::optional<PartialOrder> certify(Relation rel);

  const Relation& relation() const noexcept { return rel_; }
  std::size_t size() const noexcept { return rel_.size(); }

  bool leq(State u, State v) const { return rel_.test(u, v); }
  bool less(State u, State v) const { return u != v && rel_.test(u, v); }
  bool comparable(State u, State v) const { return rel_.test(u, v) || rel_.test(v, u); }

  friend bool operator==(const PartialOrder&, const PartialOrder&) = default;

 private:
  struct Unchecked {};
  PartialOrder(Relation rel, Unchecked) : rel_(std::move(rel)) {}
  Relation rel_;
};

}  // namespace colexidx
