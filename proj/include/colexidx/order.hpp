#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "colexidx/relation.hpp"

namespace colexidx {

/// Assignment of states to totally ordered chains. Chain indices are 0-based;
/// positions inside a chain are 1-based, matching interval encodings.
class ChainPartition {
 public:
  ChainPartition() = default;
  /// Throws std::invalid_argument unless `chains` partition 0..num_states-1.
  ChainPartition(std::vector<std::vector<State>> chains, std::size_t num_states);

  std::size_t num_chains() const noexcept { return chains_.size(); }
  std::size_t num_states() const noexcept { return chain_of_.size(); }
  const std::vector<State>& chain(std::size_t i) const { return chains_[i]; }
  const std::vector<std::vector<State>>& chains() const noexcept { return chains_; }
  std::uint32_t chain_of(State q) const { return chain_of_[q]; }
  std::uint32_t position_of(State q) const { return position_of_[q]; }

  /// True when every chain is increasing in `ord`.
  bool respects(const PartialOrder& ord) const;

  friend bool operator==(const ChainPartition&, const ChainPartition&) = default;

 private:
  std::vector<std::vector<State>> chains_;
  std::vector<std::uint32_t> chain_of_;
  std::vector<std::uint32_t> position_of_;
};

/// Smallest reflexive and transitive superset (Warshall over bit rows).
Relation transitive_reflexive_closure(const Relation& rel);

/// True iff the off-diagonal pairs contain no directed cycle (Kahn peeling).
bool is_acyclic(const Relation& rel);

/// Maximum matching in the comparability bipartite graph (u on the left, v on
/// the right, edge iff u < v). Returns mate_right[u] = v or -1.
std::vector<std::int64_t> comparability_matching(const PartialOrder& ord);

std::size_t order_width(const PartialOrder& ord);

/// Minimum chain partition; chains sorted by their minimum state id.
ChainPartition min_chain_partition(const PartialOrder& ord);

/// A largest antichain, ascending. Obtained from a minimum vertex cover of the
/// comparability bipartite graph, so its size equals order_width(ord).
StateSet max_antichain(const PartialOrder& ord);

/// u, z in set and u < v < z imply v in set.
bool is_convex(const PartialOrder& ord, std::span<const State> set);

}  // namespace colexidx
