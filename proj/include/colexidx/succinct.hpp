#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace colexidx {

/// Plain bit array with a two-level rank directory (512-bit superblocks,
/// 64-bit blocks). rank is constant time; select binary-searches the
/// superblocks and then scans at most eight words.
class BitVector {
 public:
  BitVector() { build_directory(); }
  BitVector(std::vector<std::uint64_t> words, std::size_t size);

  std::size_t size() const noexcept { return size_; }
  bool access(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const { return access(i); }

  /// Number of ones in [0, i).
  std::size_t rank1(std::size_t i) const;
  std::size_t rank0(std::size_t i) const { return i - rank1(i); }
  /// Position of the k-th one, k >= 1. Requires k <= ones().
  std::size_t select1(std::size_t k) const;
  /// Position of the k-th zero, k >= 1. Requires k <= size() - ones().
  std::size_t select0(std::size_t k) const;
  std::size_t ones() const noexcept { return ones_; }

  /// Raw words (size rounded up to whole words).
  std::span<const std::uint64_t> words() const noexcept {
    return {words_.data(), (size_ + 63) / 64};
  }
  /// 64-bit words held, directories included.
  std::size_t space_words() const noexcept;

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  void build_directory();

  std::size_t size_ = 0;
  std::size_t ones_ = 0;
  std::vector<std::uint64_t> words_;   // one spare zero word at the end
  std::vector<std::uint64_t> super_;   // ones before each superblock
  std::vector<std::uint16_t> block_;   // ones from superblock start to word
};

class BitVectorBuilder {
 public:
  void push_back(bool bit);
  void append(bool bit, std::size_t count);
  std::size_t size() const noexcept { return size_; }
  BitVector build() &&;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Level-wise balanced wavelet tree over fixed-width integer keys. Level l
/// stores bit (levels - 1 - l) of every key, with the sequence at each level
/// stably partitioned by the higher bits; after the last level the sequence
/// is stably sorted by key ("leaf order").
class WaveletTree {
 public:
  WaveletTree() = default;
  /// Every key must be < 2^levels.
  WaveletTree(std::span<const std::uint32_t> keys, unsigned levels);
  /// Reassembles a tree from stored level bitvectors.
  WaveletTree(std::vector<BitVector> levels, std::size_t size);

  std::size_t size() const noexcept { return size_; }
  unsigned levels() const noexcept { return static_cast<unsigned>(levels_.size()); }
  const std::vector<BitVector>& level_bits() const noexcept { return levels_; }

  /// Maps the sequence range [begin, end) to the leaf-order range holding
  /// exactly its elements equal to `key`, in original order.
  std::pair<std::size_t, std::size_t> restrict(std::size_t begin, std::size_t end,
                                               std::uint32_t key) const;
  /// Key at sequence position `pos` and the leaf-order position it lands on.
  std::pair<std::uint32_t, std::size_t> access(std::size_t pos) const;

  /// Leaf order as a permutation of sequence positions (stable sort by key).
  static std::vector<std::size_t> leaf_order(std::span<const std::uint32_t> keys);

  std::size_t space_words() const noexcept;

 private:
  std::size_t size_ = 0;
  std::vector<BitVector> levels_;
};

/// Constant-time range minimum and maximum over a fixed array of values:
/// sparse tables over 64-element blocks plus per-position stack masks for
/// queries inside a block. Space is O(n) words.
class RangeMinMax {
 public:
  RangeMinMax() = default;
  explicit RangeMinMax(std::vector<std::uint32_t> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::uint32_t>& values() const noexcept { return values_; }

  /// Minimum / maximum of values[l..r], inclusive, l <= r < size().
  std::uint32_t min(std::size_t l, std::size_t r) const;
  std::uint32_t max(std::size_t l, std::size_t r) const;

  std::size_t space_words() const noexcept;

  // Raw tables, exposed for serialization.
  struct Tables {
    std::vector<std::uint64_t> min_masks, max_masks;
    std::vector<std::vector<std::uint32_t>> block_min, block_max;
    friend bool operator==(const Tables&, const Tables&) = default;
  };
  const Tables& tables() const noexcept { return tables_; }
  /// Reassembles from stored tables; throws std::invalid_argument when their
  /// shapes do not fit `values`.
  RangeMinMax(std::vector<std::uint32_t> values, Tables tables);

 private:
  template <class Better>
  std::uint32_t query(std::size_t l, std::size_t r, const std::vector<std::uint64_t>& masks,
                      const std::vector<std::vector<std::uint32_t>>& table, Better better) const;

  std::vector<std::uint32_t> values_;
  Tables tables_;
};

}  // namespace colexidx
