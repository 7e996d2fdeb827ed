#include "colexidx/index.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <map>

namespace colexidx {

namespace {

unsigned ceil_log2(std::size_t x) {
  return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

std::uint32_t make_key(Symbol label, std::uint32_t chain, unsigned chain_bits) {
  return ((label - 1) << chain_bits) | chain;
}

std::pair<std::size_t, std::size_t> group_range(const BitVector& bounds, std::uint32_t l,
                                                std::uint32_t r) {
  return {bounds.rank0(bounds.select1(l)), bounds.rank0(bounds.select1(r + 1))};
}

}  // namespace

bool IntervalTuple::empty() const noexcept {
  return std::all_of(intervals.begin(), intervals.end(),
                     [](const Interval& iv) { return iv.empty(); });
}

Symbol PathIndex::encode(char ch) const noexcept {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), ch);
  if (it == alphabet_.end()) return kUnknownSymbol;
  return static_cast<Symbol>(it - alphabet_.begin()) + 1;
}

Word PathIndex::encode(std::string_view pattern) const {
  Word out;
  out.reserve(pattern.size());
  for (char ch : pattern) out.push_back(encode(ch));
  return out;
}

State PathIndex::state_at(std::size_t i, std::uint32_t position) const {
  return chains_.at(i).states.at(position - 1);
}

bool PathIndex::final_at(std::size_t i, std::uint32_t position) const {
  return chains_.at(i).finals.access(position - 1);
}

std::vector<OutEntry> PathIndex::out_entries(std::size_t i, std::uint32_t position) const {
  const Chain& c = chains_.at(i);
  auto [b, e] = group_range(c.boundaries, position, position);
  const auto mask = static_cast<std::uint32_t>((std::uint64_t{1} << chain_bits_) - 1);
  std::vector<OutEntry> out;
  for (std::size_t p = b; p < e; ++p) {
    auto [key, leaf] = c.keys.access(p);
    out.push_back({(key >> chain_bits_) + 1, key & mask, c.targets.values()[leaf]});
  }
  return out;
}

IntervalTuple PathIndex::full() const {
  IntervalTuple iv = IntervalTuple::none(chains_.size());
  for (std::size_t i = 0; i < chains_.size(); ++i)
    if (!chains_[i].states.empty())
      iv.intervals[i] = {1, static_cast<std::uint32_t>(chains_[i].states.size())};
  return iv;
}

IntervalTuple PathIndex::initial() const {
  IntervalTuple iv = IntervalTuple::none(chains_.size());
  if (!chains_.empty()) iv.intervals[initial_chain_] = {initial_position_, initial_position_};
  return iv;
}

std::size_t PathIndex::space_words() const noexcept {
  std::size_t words = 8 + (alphabet_.size() + 7) / 8;
  for (const Chain& c : chains_) {
    words += c.boundaries.space_words() + c.keys.space_words() + c.targets.space_words() +
             c.finals.space_words() + (c.states.size() + 1) / 2;
  }
  return words;
}

PathIndex build_index(const Nfa& a, const ChainPartition& cp) {
  if (cp.num_states() != a.num_states())
    throw std::invalid_argument("chain partition does not cover the automaton's states");
  require_valid(a);

  PathIndex idx;
  idx.num_states_ = a.num_states();
  idx.num_edges_ = a.num_edges();
  idx.alphabet_.assign(a.alphabet().begin(), a.alphabet().end());
  idx.label_bits_ = ceil_log2(a.sigma());
  idx.chain_bits_ = ceil_log2(cp.num_chains());
  if (idx.label_bits_ + idx.chain_bits_ > 32)
    throw std::invalid_argument("alphabet and chain count overflow 32-bit keys");
  idx.initial_chain_ = cp.chain_of(a.initial());
  idx.initial_position_ = cp.position_of(a.initial());

  const unsigned levels = idx.label_bits_ + idx.chain_bits_;
  idx.chains_.resize(cp.num_chains());
  for (std::size_t i = 0; i < cp.num_chains(); ++i) {
    auto& chain = idx.chains_[i];
    const auto& states = cp.chain(i);
    chain.states.assign(states.begin(), states.end());

    BitVectorBuilder bounds, finals;
    std::vector<std::uint32_t> keys, positions;
    for (State q : states) {
      bounds.push_back(true);
      finals.push_back(a.is_final(q));
      for (const Edge& e : a.out_edges(q)) {
        keys.push_back(make_key(e.label, cp.chain_of(e.target), idx.chain_bits_));
        positions.push_back(cp.position_of(e.target));
        bounds.push_back(false);
      }
    }
    bounds.push_back(true);

    auto order = WaveletTree::leaf_order(keys);
    std::vector<std::uint32_t> leaf_positions(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) leaf_positions[p] = positions[order[p]];

    chain.boundaries = std::move(bounds).build();
    chain.finals = std::move(finals).build();
    chain.keys = WaveletTree(keys, levels);
    chain.targets = RangeMinMax(std::move(leaf_positions));
  }
  return idx;
}

namespace {

struct Bounds {
  std::vector<std::uint32_t> lo, hi;

  explicit Bounds(const PathIndex& idx) : lo(idx.num_chains()), hi(idx.num_chains(), 0) {
    for (std::size_t j = 0; j < idx.num_chains(); ++j)
      lo[j] = static_cast<std::uint32_t>(idx.chain_size(j)) + 1;
  }
  void update(std::size_t j, std::uint32_t m, std::uint32_t M) {
    lo[j] = std::min(lo[j], m);
    hi[j] = std::max(hi[j], M);
  }
  IntervalTuple tuple() const {
    IntervalTuple out = IntervalTuple::none(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j)
      if (hi[j] != 0) out.intervals[j] = {lo[j], hi[j]};
    return out;
  }
};

void check_shape(const PathIndex& idx, const IntervalTuple& iv) {
  if (iv.num_chains() != idx.num_chains())
    throw std::invalid_argument("interval tuple has the wrong number of chains");
  for (std::size_t i = 0; i < iv.num_chains(); ++i) {
    const Interval& in = iv.intervals[i];
    if (!in.empty() && (in.l == 0 || in.r > idx.chain_size(i)))
      throw std::invalid_argument("interval outside its chain");
  }
}

}  // namespace

IntervalTuple extend(const PathIndex& idx, const IntervalTuple& iv, Symbol a) {
  check_shape(idx, iv);
  if (a == kSentinel || a > idx.sigma()) return IntervalTuple::none(idx.num_chains());
  Bounds bounds(idx);
  for (std::size_t j = 0; j < idx.num_chains(); ++j) {
    for (std::size_t i = 0; i < idx.num_chains(); ++i) {
      const Interval& in = iv.intervals[i];
      if (in.empty()) continue;
      for (std::uint32_t s = in.l; s <= in.r; ++s)
        for (const OutEntry& e : idx.out_entries(i, s))
          if (e.label == a && e.chain == j) bounds.update(j, e.position, e.position);
    }
  }
  return bounds.tuple();
}

IntervalTuple extend_fast(const PathIndex& idx, const IntervalTuple& iv, Symbol a) {
  check_shape(idx, iv);
  if (a == kSentinel || a > idx.sigma()) return IntervalTuple::none(idx.num_chains());
  Bounds bounds(idx);
  for (std::size_t i = 0; i < idx.num_chains(); ++i) {
    const Interval& in = iv.intervals[i];
    if (in.empty()) continue;
    auto [b, e] = group_range(idx.boundaries(i), in.l, in.r);
    if (b == e) continue;
    const WaveletTree& keys = idx.keys(i);
    const RangeMinMax& targets = idx.targets(i);
    for (std::size_t j = 0; j < idx.num_chains(); ++j) {
      auto [lb, le] = keys.restrict(b, e, make_key(a, static_cast<std::uint32_t>(j),
                                                   idx.chain_bits()));
      if (lb == le) continue;
      bounds.update(j, targets.min(lb, le - 1), targets.max(lb, le - 1));
    }
  }
  return bounds.tuple();
}

IntervalTuple match_anywhere(const PathIndex& idx, std::span<const Symbol> pattern) {
  IntervalTuple iv = idx.full();
  for (Symbol c : pattern) {
    if (iv.empty()) break;
    iv = extend_fast(idx, iv, c);
  }
  return iv;
}

IntervalTuple match_anywhere(const PathIndex& idx, std::string_view pattern) {
  return match_anywhere(idx, idx.encode(pattern));
}

IntervalTuple match_from_start(const PathIndex& idx, std::span<const Symbol> pattern) {
  IntervalTuple iv = idx.initial();
  for (Symbol c : pattern) {
    if (iv.empty()) break;
    iv = extend_fast(idx, iv, c);
  }
  return iv;
}

IntervalTuple match_from_start(const PathIndex& idx, std::string_view pattern) {
  return match_from_start(idx, idx.encode(pattern));
}

std::size_t count(const PathIndex& idx, const IntervalTuple& iv) {
  check_shape(idx, iv);
  std::size_t total = 0;
  for (const Interval& in : iv.intervals) total += in.size();
  return total;
}

StateSet locate(const PathIndex& idx, const IntervalTuple& iv) {
  check_shape(idx, iv);
  StateSet out;
  for (std::size_t i = 0; i < iv.num_chains(); ++i) {
    const Interval& in = iv.intervals[i];
    for (std::uint32_t p = in.l; p <= in.r; ++p) out.push_back(idx.state_at(i, p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_member(const PathIndex& idx, std::span<const Symbol> pattern) {
  IntervalTuple iv = match_from_start(idx, pattern);
  for (std::size_t i = 0; i < iv.num_chains(); ++i) {
    const Interval& in = iv.intervals[i];
    if (in.empty()) continue;
    const BitVector& f = idx.finals(i);
    if (f.rank1(in.r) - f.rank1(in.l - 1) > 0) return true;
  }
  return false;
}

bool is_member(const PathIndex& idx, std::string_view pattern) {
  return is_member(idx, idx.encode(pattern));
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

enum Section : std::uint32_t {
  kHeader = 1,
  kChains = 2,
  kBoundaries = 3,
  kWavelet = 4,
  kMinMax = 5,
  kFinals = 6,
  kSatellites = 7,
};
constexpr char kMagic[4] = {'C', 'L', 'X', 'I'};
constexpr std::size_t kPreamble = 4 + 4 + 8 + 4;
constexpr std::size_t kTableEntry = 4 + 8 + 8;

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) bytes_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 0; s < 64; s += 8) bytes_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void bits(const BitVector& bv) {
    u64(bv.size());
    for (std::uint64_t w : bv.words()) u64(w);
  }
  void u32s(const std::vector<std::uint32_t>& v) {
    u64(v.size());
    for (std::uint32_t x : v) u32(x);
  }
  void u64s(const std::vector<std::uint64_t>& v) {
    u64(v.size());
    for (std::uint64_t x : v) u64(x);
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | b[k];
    return v;
  }
  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | b[k];
    return v;
  }
  std::size_t count(std::size_t elem_bytes) {
    std::uint64_t n = u64();
    if (n > (bytes_.size() - pos_) / elem_bytes) corrupt("element count exceeds section");
    return static_cast<std::size_t>(n);
  }
  BitVector bits() {
    std::uint64_t size = u64();
    if (size > (bytes_.size() - pos_) * 8) corrupt("bitvector exceeds section");
    std::vector<std::uint64_t> words((size + 63) / 64);
    for (auto& w : words) w = u64();
    if (size % 64 != 0 && (words.back() >> (size % 64)) != 0) corrupt("stray bits past end");
    return BitVector(std::move(words), size);
  }
  std::vector<std::uint32_t> u32s() {
    std::vector<std::uint32_t> v(count(4));
    for (auto& x : v) x = u32();
    return v;
  }
  std::vector<std::uint64_t> u64s() {
    std::vector<std::uint64_t> v(count(8));
    for (auto& x : v) x = u64();
    return v;
  }

  [[noreturn]] static void corrupt(const std::string& what) {
    throw FormatError(FormatError::Kind::kCorrupt, "corrupt index: " + what);
  }

 private:
  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) corrupt("section ends early");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in pieces.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    std::size_t len = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, bytes.data() + off, static_cast<uInt>(len));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> serialize(const PathIndex& idx) {
  std::vector<std::pair<std::uint32_t, std::vector<std::uint8_t>>> sections;

  {
    Writer w;
    w.u64(idx.num_states_);
    w.u64(idx.num_edges_);
    w.u32(static_cast<std::uint32_t>(idx.chains_.size()));
    w.u32(static_cast<std::uint32_t>(idx.alphabet_.size()));
    for (char c : idx.alphabet_) w.u8(static_cast<std::uint8_t>(c));
    w.u32(idx.label_bits_);
    w.u32(idx.chain_bits_);
    w.u32(idx.initial_chain_);
    w.u32(idx.initial_position_);
    sections.emplace_back(kHeader, std::move(w.bytes()));
  }
  {
    Writer w;
    for (const auto& c : idx.chains_) w.u64(c.states.size());
    sections.emplace_back(kChains, std::move(w.bytes()));
  }
  {
    Writer w;
    for (const auto& c : idx.chains_) w.bits(c.boundaries);
    sections.emplace_back(kBoundaries, std::move(w.bytes()));
  }
  {
    Writer w;
    for (const auto& c : idx.chains_) {
      w.u64(c.keys.size());
      w.u32(c.keys.levels());
      for (const BitVector& level : c.keys.level_bits()) w.bits(level);
    }
    sections.emplace_back(kWavelet, std::move(w.bytes()));
  }
  {
    Writer w;
    for (const auto& c : idx.chains_) {
      const auto& t = c.targets.tables();
      w.u64s(t.min_masks);
      w.u64s(t.max_masks);
      w.u32(static_cast<std::uint32_t>(t.block_min.size()));
      for (std::size_t k = 0; k < t.block_min.size(); ++k) {
        w.u32s(t.block_min[k]);
        w.u32s(t.block_max[k]);
      }
    }
    sections.emplace_back(kMinMax, std::move(w.bytes()));
  }
  {
    Writer w;
    for (const auto& c : idx.chains_) w.bits(c.finals);
    sections.emplace_back(kFinals, std::move(w.bytes()));
  }
  {
    Writer w;
    for (const auto& c : idx.chains_) {
      w.u32s(c.targets.values());
      w.u32s(c.states);
    }
    sections.emplace_back(kSatellites, std::move(w.bytes()));
  }

  std::size_t total = kPreamble + kTableEntry * sections.size();
  for (const auto& [id, body] : sections) total += body.size();
  total += 4;

  Writer out;
  for (char c : kMagic) out.u8(static_cast<std::uint8_t>(c));
  out.u32(kIndexFormatVersion);
  out.u64(total);
  out.u32(static_cast<std::uint32_t>(sections.size()));
  std::uint64_t offset = kPreamble + kTableEntry * sections.size();
  for (const auto& [id, body] : sections) {
    out.u32(id);
    out.u64(offset);
    out.u64(body.size());
    offset += body.size();
  }
  for (const auto& [id, body] : sections)
    out.bytes().insert(out.bytes().end(), body.begin(), body.end());
  out.u32(crc32_of(out.bytes()));
  return std::move(out.bytes());
}

PathIndex deserialize(std::span<const std::uint8_t> bytes) {
  using Kind = FormatError::Kind;
  if (bytes.size() < sizeof kMagic) throw FormatError(Kind::kTruncated, "index stream truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw FormatError(Kind::kVersionMismatch, "not an index file (bad magic)");
  if (bytes.size() < kPreamble + 4) throw FormatError(Kind::kTruncated, "index stream truncated");

  Reader pre(bytes.subspan(4, kPreamble - 4));
  std::uint32_t version = pre.u32();
  if (version != kIndexFormatVersion)
    throw FormatError(Kind::kVersionMismatch,
                      "unsupported index version " + std::to_string(version));
  std::uint64_t total = pre.u64();
  std::uint32_t num_sections = pre.u32();
  if (bytes.size() < total) throw FormatError(Kind::kTruncated, "index stream truncated");
  if (bytes.size() > total) Reader::corrupt("trailing bytes after checksum");
  if (total < kPreamble + 4) Reader::corrupt("declared length too small");

  Reader tail(bytes.subspan(total - 4));
  if (tail.u32() != crc32_of(bytes.first(total - 4)))
    throw FormatError(Kind::kChecksum, "index checksum mismatch");

  if (num_sections > (total - kPreamble - 4) / kTableEntry) Reader::corrupt("section table");
  Reader table(bytes.subspan(kPreamble, kTableEntry * num_sections));
  std::map<std::uint32_t, std::span<const std::uint8_t>> sections;
  for (std::uint32_t s = 0; s < num_sections; ++s) {
    std::uint32_t id = table.u32();
    std::uint64_t offset = table.u64(), length = table.u64();
    if (offset > total - 4 || length > total - 4 - offset) Reader::corrupt("section bounds");
    if (!sections.emplace(id, bytes.subspan(offset, length)).second)
      Reader::corrupt("duplicate section");
  }
  auto section = [&](std::uint32_t id) {
    auto it = sections.find(id);
    if (it == sections.end()) Reader::corrupt("missing section " + std::to_string(id));
    return Reader(it->second);
  };
  auto expect_done = [](const Reader& r) {
    if (!r.done()) Reader::corrupt("unexpected bytes at section end");
  };

  PathIndex idx;
  std::size_t t = 0;
  {
    Reader r = section(kHeader);
    idx.num_states_ = r.u64();
    idx.num_edges_ = r.u64();
    t = r.u32();
    std::uint32_t sigma = r.u32();
    for (std::uint32_t k = 0; k < sigma; ++k) idx.alphabet_.push_back(static_cast<char>(r.u8()));
    idx.label_bits_ = r.u32();
    idx.chain_bits_ = r.u32();
    idx.initial_chain_ = r.u32();
    idx.initial_position_ = r.u32();
    expect_done(r);
    if (idx.label_bits_ != ceil_log2(sigma) || idx.chain_bits_ != ceil_log2(t))
      Reader::corrupt("key widths do not match alphabet and chain count");
    if (t == 0 || t > idx.num_states_) Reader::corrupt("chain count");
  }

  idx.chains_.resize(t);
  {
    Reader r = section(kChains);
    std::uint64_t sum = 0;
    for (auto& c : idx.chains_) {
      std::uint64_t size = r.u64();
      if (size == 0 || size > idx.num_states_) Reader::corrupt("chain size");
      sum += size;
      c.states.resize(size);
    }
    expect_done(r);
    if (sum != idx.num_states_) Reader::corrupt("chain sizes do not sum to the state count");
  }
  {
    Reader r = section(kBoundaries);
    std::uint64_t edges = 0;
    for (auto& c : idx.chains_) {
      c.boundaries = r.bits();
      if (c.boundaries.ones() != c.states.size() + 1 || !c.boundaries.access(0) ||
          !c.boundaries.access(c.boundaries.size() - 1))
        Reader::corrupt("boundary bitvector shape");
      edges += c.boundaries.size() - c.boundaries.ones();
    }
    expect_done(r);
    if (edges != idx.num_edges_) Reader::corrupt("edge count");
  }
  {
    Reader r = section(kWavelet);
    const unsigned levels = idx.label_bits_ + idx.chain_bits_;
    for (auto& c : idx.chains_) {
      std::uint64_t size = r.u64();
      std::uint32_t stored_levels = r.u32();
      if (size != c.boundaries.size() - c.boundaries.ones() || stored_levels != levels)
        Reader::corrupt("wavelet tree shape");
      std::vector<BitVector> bits;
      for (std::uint32_t l = 0; l < stored_levels; ++l) {
        bits.push_back(r.bits());
        if (bits.back().size() != size) Reader::corrupt("wavelet level length");
      }
      c.keys = WaveletTree(std::move(bits), size);
    }
    expect_done(r);
  }
  std::vector<RangeMinMax::Tables> tables(t);
  {
    Reader r = section(kMinMax);
    for (auto& tab : tables) {
      tab.min_masks = r.u64s();
      tab.max_masks = r.u64s();
      std::uint32_t depth = r.u32();
      if (depth > 64) Reader::corrupt("range table depth");
      for (std::uint32_t k = 0; k < depth; ++k) {
        tab.block_min.push_back(r.u32s());
        tab.block_max.push_back(r.u32s());
      }
    }
    expect_done(r);
  }
  {
    Reader r = section(kFinals);
    for (auto& c : idx.chains_) {
      c.finals = r.bits();
      if (c.finals.size() != c.states.size()) Reader::corrupt("final marks length");
    }
    expect_done(r);
  }
  {
    Reader r = section(kSatellites);
    std::vector<std::uint8_t> seen(idx.num_states_, 0);
    for (std::size_t i = 0; i < t; ++i) {
      auto& c = idx.chains_[i];
      auto values = r.u32s();
      if (values.size() != c.keys.size()) Reader::corrupt("target positions length");
      try {
        c.targets = RangeMinMax(std::move(values), std::move(tables[i]));
      } catch (const std::invalid_argument& e) {
        Reader::corrupt(e.what());
      }
      // Query code trusts the masks, so they must be the ones the values imply.
      if (RangeMinMax(c.targets.values()).tables() != c.targets.tables())
        Reader::corrupt("range min/max tables disagree with the values");
      auto states = r.u32s();
      if (states.size() != c.states.size()) Reader::corrupt("state id array length");
      for (State q : states) {
        if (q >= idx.num_states_ || seen[q]) Reader::corrupt("state ids are not a permutation");
        seen[q] = 1;
      }
      c.states = std::move(states);
    }
    expect_done(r);
  }

  if (idx.initial_chain_ >= t || idx.initial_position_ == 0 ||
      idx.initial_position_ > idx.chains_[idx.initial_chain_].states.size())
    Reader::corrupt("initial state coordinates");
  // Every stored edge must point at a real position of a real chain.
  const auto mask = static_cast<std::uint32_t>((std::uint64_t{1} << idx.chain_bits_) - 1);
  for (const auto& c : idx.chains_) {
    for (std::size_t p = 0; p < c.keys.size(); ++p) {
      auto [key, leaf] = c.keys.access(p);
      std::uint32_t label = (key >> idx.chain_bits_) + 1, j = key & mask;
      std::uint32_t q = c.targets.values()[leaf];
      if (label > idx.alphabet_.size() || j >= t || q == 0 || q > idx.chains_[j].states.size())
        Reader::corrupt("edge target out of range");
    }
  }
  return idx;
}

}  // namespace colexidx
