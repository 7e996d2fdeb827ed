#include "colexidx/succinct.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace colexidx {

namespace {
constexpr std::size_t kWordsPerSuper = 8;
constexpr std::size_t kBitsPerSuper = 64 * kWordsPerSuper;

// Position of the k-th (1-based) set bit of `word`.
unsigned select_in_word(std::uint64_t word, std::size_t k) {
  for (std::size_t i = 1; i < k; ++i) word &= word - 1;
  return static_cast<unsigned>(std::countr_zero(word));
}
}  // namespace

// ---------------------------------------------------------------------------
// BitVector

BitVector::BitVector(std::vector<std::uint64_t> words, std::size_t size)
    : size_(size), words_(std::move(words)) {
  if (words_.size() < (size + 63) / 64) throw std::invalid_argument("bitvector words too short");
  build_directory();
}

void BitVector::build_directory() {
  const std::size_t used = (size_ + 63) / 64;
  words_.resize(used + 1, 0);
  if (size_ % 64 != 0) words_[used - 1] &= (std::uint64_t{1} << (size_ % 64)) - 1;
  super_.assign((words_.size() + kWordsPerSuper - 1) / kWordsPerSuper, 0);
  block_.assign(words_.size(), 0);
  std::size_t total = 0, in_super = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (w % kWordsPerSuper == 0) {
      super_[w / kWordsPerSuper] = total;
      in_super = 0;
    }
    block_[w] = static_cast<std::uint16_t>(in_super);
    auto c = static_cast<std::size_t>(std::popcount(words_[w]));
    in_super += c;
    total += c;
  }
  ones_ = total;
}

std::size_t BitVector::rank1(std::size_t i) const {
  const std::size_t w = i >> 6;
  std::size_t r = super_[w / kWordsPerSuper] + block_[w];
  if (i & 63) r += static_cast<std::size_t>(std::popcount(words_[w] << (64 - (i & 63))));
  return r;
}

std::size_t BitVector::select1(std::size_t k) const {
  if (k == 0 || k > ones_) throw std::out_of_range("select1 rank out of range");
  // Last superblock with fewer than k ones before it.
  auto it = std::lower_bound(super_.begin(), super_.end(), k);
  std::size_t s = static_cast<std::size_t>(it - super_.begin()) - 1;
  std::size_t remaining = k - super_[s];
  for (std::size_t w = s * kWordsPerSuper; w < words_.size(); ++w) {
    auto c = static_cast<std::size_t>(std::popcount(words_[w]));
    if (remaining <= c) return w * 64 + select_in_word(words_[w], remaining);
    remaining -= c;
  }
  throw std::logic_error("select1 ran past the directory");
}

std::size_t BitVector::select0(std::size_t k) const {
  if (k == 0 || k > size_ - ones_) throw std::out_of_range("select0 rank out of range");
  std::size_t lo = 0, hi = super_.size();
  // Largest s with zeros_before(s) < k.
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    std::size_t zeros = mid * kBitsPerSuper - super_[mid];
    if (mid * kWordsPerSuper < words_.size() && zeros < k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::size_t remaining = k - (lo * kBitsPerSuper - super_[lo]);
  for (std::size_t w = lo * kWordsPerSuper; w < words_.size(); ++w) {
    auto c = static_cast<std::size_t>(std::popcount(~words_[w]));
    if (remaining <= c) return w * 64 + select_in_word(~words_[w], remaining);
    remaining -= c;
  }
  throw std::logic_error("select0 ran past the directory");
}

std::size_t BitVector::space_words() const noexcept {
  return words_.size() + super_.size() + (block_.size() + 3) / 4 + 2;
}

void BitVectorBuilder::push_back(bool bit) {
  if (size_ % 64 == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (size_ % 64);
  ++size_;
}

void BitVectorBuilder::append(bool bit, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) push_back(bit);
}

BitVector BitVectorBuilder::build() && { return BitVector(std::move(words_), size_); }

// ---------------------------------------------------------------------------
// WaveletTree

WaveletTree::WaveletTree(std::span<const std::uint32_t> keys, unsigned levels)
    : size_(keys.size()) {
  if (levels > 32) throw std::invalid_argument("wavelet tree deeper than 32 levels");
  for (std::uint32_t key : keys)
    if (levels < 32 && (key >> levels) != 0)
      throw std::invalid_argument("key does not fit the wavelet tree width");
  std::vector<std::uint32_t> current(keys.begin(), keys.end());
  std::vector<std::uint32_t> zeros, ones;
  for (unsigned level = 0; level < levels; ++level) {
    const unsigned bit = levels - 1 - level;
    BitVectorBuilder builder;
    // Within each node the elements keep their order; nodes stay contiguous
    // because `current` is sorted by the bits above `bit`.
    std::size_t begin = 0;
    std::vector<std::uint32_t> next;
    next.reserve(current.size());
    while (begin < current.size()) {
      std::size_t end = begin;
      const std::uint64_t prefix = std::uint64_t{current[begin]} >> (bit + 1);
      while (end < current.size() && (std::uint64_t{current[end]} >> (bit + 1)) == prefix) ++end;
      zeros.clear();
      ones.clear();
      for (std::size_t i = begin; i < end; ++i) {
        bool b = (current[i] >> bit) & 1u;
        builder.push_back(b);
        (b ? ones : zeros).push_back(current[i]);
      }
      next.insert(next.end(), zeros.begin(), zeros.end());
      next.insert(next.end(), ones.begin(), ones.end());
      begin = end;
    }
    levels_.push_back(std::move(builder).build());
    current.swap(next);
  }
}

WaveletTree::WaveletTree(std::vector<BitVector> levels, std::size_t size)
    : size_(size), levels_(std::move(levels)) {
  for (const auto& bv : levels_)
    if (bv.size() != size_) throw std::invalid_argument("wavelet level length mismatch");
}

std::pair<std::size_t, std::size_t> WaveletTree::restrict(std::size_t begin, std::size_t end,
                                                          std::uint32_t key) const {
  const auto h = static_cast<unsigned>(levels_.size());
  std::size_t node_begin = 0, node_end = size_;
  for (unsigned level = 0; level < h && begin < end; ++level) {
    const BitVector& bv = levels_[level];
    const bool bit = (key >> (h - 1 - level)) & 1u;
    const std::size_t zeros_before_node = bv.rank0(node_begin);
    const std::size_t node_zeros = bv.rank0(node_end) - zeros_before_node;
    if (!bit) {
      begin = node_begin + (bv.rank0(begin) - zeros_before_node);
      end = node_begin + (bv.rank0(end) - zeros_before_node);
      node_end = node_begin + node_zeros;
    } else {
      const std::size_t ones_before_node = node_begin - zeros_before_node;
      begin = node_begin + node_zeros + (bv.rank1(begin) - ones_before_node);
      end = node_begin + node_zeros + (bv.rank1(end) - ones_before_node);
      node_begin += node_zeros;
    }
  }
  if (begin >= end) return {0, 0};
  return {begin, end};
}

std::pair<std::uint32_t, std::size_t> WaveletTree::access(std::size_t pos) const {
  const auto h = static_cast<unsigned>(levels_.size());
  std::size_t node_begin = 0, node_end = size_;
  std::uint32_t key = 0;
  for (unsigned level = 0; level < h; ++level) {
    const BitVector& bv = levels_[level];
    const bool bit = bv[pos];
    key = (key << 1) | static_cast<std::uint32_t>(bit);
    const std::size_t zeros_before_node = bv.rank0(node_begin);
    const std::size_t node_zeros = bv.rank0(node_end) - zeros_before_node;
    if (!bit) {
      pos = node_begin + (bv.rank0(pos) - zeros_before_node);
      node_end = node_begin + node_zeros;
    } else {
      pos = node_begin + node_zeros + (bv.rank1(pos) - (node_begin - zeros_before_node));
      node_begin += node_zeros;
    }
  }
  return {key, pos};
}

std::vector<std::size_t> WaveletTree::leaf_order(std::span<const std::uint32_t> keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return order;
}

std::size_t WaveletTree::space_words() const noexcept {
  std::size_t total = 2;
  for (const auto& bv : levels_) total += bv.space_words();
  return total;
}

// ---------------------------------------------------------------------------
// RangeMinMax

namespace {

template <class Better>
std::vector<std::uint64_t> stack_masks(const std::vector<std::uint32_t>& values, Better better) {
  std::vector<std::uint64_t> masks(values.size(), 0);
  for (std::size_t block = 0; block < values.size(); block += 64) {
    std::uint64_t mask = 0;
    const std::size_t end = std::min(values.size(), block + 64);
    for (std::size_t i = block; i < end; ++i) {
      // Drop candidates that the new element dominates (ties keep the new one).
      while (mask) {
        const unsigned top = 63 - static_cast<unsigned>(std::countl_zero(mask));
        if (better(values[i], values[block + top]) || values[i] == values[block + top]) {
          mask &= ~(std::uint64_t{1} << top);
        } else {
          break;
        }
      }
      mask |= std::uint64_t{1} << (i - block);
      masks[i] = mask;
    }
  }
  return masks;
}

template <class Better>
std::vector<std::vector<std::uint32_t>> block_table(const std::vector<std::uint32_t>& values,
                                                    Better better) {
  const std::size_t blocks = (values.size() + 63) / 64;
  std::vector<std::vector<std::uint32_t>> table;
  if (blocks == 0) return table;
  std::vector<std::uint32_t> base(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t end = std::min(values.size(), b * 64 + 64);
    std::uint32_t best = values[b * 64];
    for (std::size_t i = b * 64 + 1; i < end; ++i)
      if (better(values[i], best)) best = values[i];
    base[b] = best;
  }
  table.push_back(std::move(base));
  for (std::size_t span = 2; span <= blocks; span *= 2) {
    const auto& prev = table.back();
    std::vector<std::uint32_t> level(blocks - span + 1);
    for (std::size_t b = 0; b + span <= blocks; ++b) {
      std::uint32_t x = prev[b], y = prev[b + span / 2];
      level[b] = better(y, x) ? y : x;
    }
    table.push_back(std::move(level));
  }
  return table;
}

}  // namespace

RangeMinMax::RangeMinMax(std::vector<std::uint32_t> values) : values_(std::move(values)) {
  tables_.min_masks = stack_masks(values_, std::less<>{});
  tables_.max_masks = stack_masks(values_, std::greater<>{});
  tables_.block_min = block_table(values_, std::less<>{});
  tables_.block_max = block_table(values_, std::greater<>{});
}

RangeMinMax::RangeMinMax(std::vector<std::uint32_t> values, Tables tables)
    : values_(std::move(values)), tables_(std::move(tables)) {
  const std::size_t n = values_.size();
  const std::size_t blocks = (n + 63) / 64;
  auto table_ok = [&](const std::vector<std::vector<std::uint32_t>>& t) {
    std::size_t span = 1;
    for (const auto& level : t) {
      if (span > blocks || level.size() != blocks - span + 1) return false;
      span *= 2;
    }
    return blocks == 0 ? t.empty() : (span > blocks && span / 2 <= blocks);
  };
  if (tables_.min_masks.size() != n || tables_.max_masks.size() != n ||
      !table_ok(tables_.block_min) || !table_ok(tables_.block_max))
    throw std::invalid_argument("range min/max tables do not match the values");
}

template <class Better>
std::uint32_t RangeMinMax::query(std::size_t l, std::size_t r,
                                 const std::vector<std::uint64_t>& masks,
                                 const std::vector<std::vector<std::uint32_t>>& table,
                                 Better better) const {
  auto in_block = [&](std::size_t lo, std::size_t hi) {
    const std::size_t block = hi & ~std::size_t{63};
    const std::uint64_t m = masks[hi] & (~std::uint64_t{0} << (lo - block));
    return values_[block + static_cast<std::size_t>(std::countr_zero(m))];
  };
  const std::size_t bl = l / 64, br = r / 64;
  if (bl == br) return in_block(l, r);
  std::uint32_t best = in_block(l, bl * 64 + 63);
  std::uint32_t right = in_block(br * 64, r);
  if (better(right, best)) best = right;
  if (bl + 1 < br) {
    const std::size_t count = br - bl - 1;
    const auto k = static_cast<std::size_t>(std::bit_width(count) - 1);
    std::uint32_t x = table[k][bl + 1];
    std::uint32_t y = table[k][br - (std::size_t{1} << k)];
    if (better(x, best)) best = x;
    if (better(y, best)) best = y;
  }
  return best;
}

std::uint32_t RangeMinMax::min(std::size_t l, std::size_t r) const {
  return query(l, r, tables_.min_masks, tables_.block_min, std::less<>{});
}

std::uint32_t RangeMinMax::max(std::size_t l, std::size_t r) const {
  return query(l, r, tables_.max_masks, tables_.block_max, std::greater<>{});
}

std::size_t RangeMinMax::space_words() const noexcept {
  std::size_t total = (values_.size() + 1) / 2 + tables_.min_masks.size() +
                      tables_.max_masks.size() + 4;
  for (const auto& level : tables_.block_min) total += (level.size() + 1) / 2;
  for (const auto& level : tables_.block_max) total += (level.size() + 1) / 2;
  return total;
}

}  // namespace colexidx
