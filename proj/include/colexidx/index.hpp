#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "colexidx/automaton.hpp"
#include "colexidx/order.hpp"
#include "colexidx/succinct.hpp"

namespace colexidx {

/// 1-based inclusive positions into one chain; (1, 0) is the empty interval.
struct Interval {
  std::uint32_t l = 1;
  std::uint32_t r = 0;

  bool empty() const noexcept { return r < l; }
  std::size_t size() const noexcept { return empty() ? 0 : r - l + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// One interval per chain, encoding the union of the chain slices.
struct IntervalTuple {
  std::vector<Interval> intervals;

  static IntervalTuple none(std::size_t chains) { return {std::vector<Interval>(chains)}; }
  std::size_t num_chains() const noexcept { return intervals.size(); }
  bool empty() const noexcept;
  friend bool operator==(const IntervalTuple&, const IntervalTuple&) = default;
};

/// One outgoing edge as stored for a chain position: label, target chain,
/// target position (1-based).
struct OutEntry {
  Symbol label = 0;
  std::uint32_t chain = 0;
  std::uint32_t position = 0;
  friend auto operator<=>(const OutEntry&, const OutEntry&) = default;
};

class FormatError : public std::runtime_error {
 public:
  enum class Kind { kVersionMismatch, kTruncated, kChecksum, kCorrupt };
  FormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Immutable pattern-matching index over an automaton whose states are split
/// into chains of a weakly path coherent order.
///
/// For chain i the outgoing edges of its k-th state form group k of a
/// sequence W_i of (label, target chain) keys, delimited by a boundary
/// bitvector (a 1 opens each group, a trailing 1 closes the last). Keys live
/// in a wavelet tree whose leaf order groups edges by key while keeping
/// source order; the target positions, permuted into leaf order, sit under a
/// range min/max structure. Given the source interval of chain i, a key
/// (a, j) narrows to a leaf range whose min and max delimit the successor
/// interval in chain j.
///
/// Safe for concurrent readers.
class PathIndex {
 public:
  PathIndex() = default;

  std::size_t num_chains() const noexcept { return chains_.size(); }
  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_edges() const noexcept { return num_edges_; }
  std::size_t chain_size(std::size_t i) const { return chains_[i].states.size(); }
  const std::vector<char>& alphabet() const noexcept { return alphabet_; }
  std::size_t sigma() const noexcept { return alphabet_.size(); }
  unsigned label_bits() const noexcept { return label_bits_; }
  unsigned chain_bits() const noexcept { return chain_bits_; }
  std::uint32_t initial_chain() const noexcept { return initial_chain_; }
  std::uint32_t initial_position() const noexcept { return initial_position_; }

  Symbol encode(char ch) const noexcept;
  Word encode(std::string_view pattern) const;

  /// Original state id at 1-based `position` of chain `i`.
  State state_at(std::size_t i, std::uint32_t position) const;
  bool final_at(std::size_t i, std::uint32_t position) const;
  /// OUT_i[position], decoded from the wavelet tree, in stored order.
  std::vector<OutEntry> out_entries(std::size_t i, std::uint32_t position) const;

  const BitVector& boundaries(std::size_t i) const { return chains_[i].boundaries; }
  const WaveletTree& keys(std::size_t i) const { return chains_[i].keys; }
  const RangeMinMax& targets(std::size_t i) const { return chains_[i].targets; }
  const BitVector& finals(std::size_t i) const { return chains_[i].finals; }

  IntervalTuple full() const;
  IntervalTuple initial() const;

  /// 64-bit words held by all structures.
  std::size_t space_words() const noexcept;

 private:
  friend PathIndex build_index(const Nfa& a, const ChainPartition& cp);
  friend PathIndex deserialize(std::span<const std::uint8_t> bytes);
  friend std::vector<std::uint8_t> serialize(const PathIndex& idx);

  struct Chain {
    BitVector boundaries;
    WaveletTree keys;
    RangeMinMax targets;
    BitVector finals;
    std::vector<State> states;
  };

  std::size_t num_states_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<char> alphabet_;
  unsigned label_bits_ = 0;
  unsigned chain_bits_ = 0;
  std::uint32_t initial_chain_ = 0;
  std::uint32_t initial_position_ = 0;
  std::vector<Chain> chains_;
};

/// Throws std::invalid_argument when `cp` does not partition a's states or
/// `a` is not a valid automaton.
PathIndex build_index(const Nfa& a, const ChainPartition& cp);

/// Forward extension by direct scan of the OUT groups of every source
/// interval. Reference implementation for extend_fast.
IntervalTuple extend(const PathIndex& idx, const IntervalTuple& iv, Symbol a);
/// Forward extension through rank/select, wavelet restriction and range
/// min/max; O(t^2 log(t sigma)).
IntervalTuple extend_fast(const PathIndex& idx, const IntervalTuple& iv, Symbol a);

/// States reached by some path whose label ends with `pattern`.
IntervalTuple match_anywhere(const PathIndex& idx, std::span<const Symbol> pattern);
IntervalTuple match_anywhere(const PathIndex& idx, std::string_view pattern);
/// States reached from the initial state by reading exactly `pattern`.
///
/// The reached set of any string is convex in an order where u <= v implies
/// I_u precedes-or-equals I_v, by the same argument that makes B(P) convex,
/// so anchoring at the initial state keeps every step an interval.
IntervalTuple match_from_start(const PathIndex& idx, std::span<const Symbol> pattern);
IntervalTuple match_from_start(const PathIndex& idx, std::string_view pattern);

std::size_t count(const PathIndex& idx, const IntervalTuple& iv);
/// Original state ids, ascending.
StateSet locate(const PathIndex& idx, const IntervalTuple& iv);
bool is_member(const PathIndex& idx, std::span<const Symbol> pattern);
bool is_member(const PathIndex& idx, std::string_view pattern);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

/// Binary layout: "CLXI", u32 version, u64 total length, u32 section count,
/// section table (u32 id, u64 offset, u64 length), sections, u32 CRC32 of
/// everything before it. All integers little-endian.
std::vector<std::uint8_t> serialize(const PathIndex& idx);
PathIndex deserialize(std::span<const std::uint8_t> bytes);

}  // namespace colexidx
