#include <doctest.h>

#include <algorithm>
#include <random>

#include "colexidx/succinct.hpp"

using namespace colexidx;

namespace {

BitVector random_bits(std::mt19937_64& rng, std::size_t n, unsigned density) {
  BitVectorBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(rng() % 100 < density);
  return std::move(b).build();
}

}  // namespace

TEST_SUITE("succinct") {

TEST_CASE("bitvector rank and select against a scan") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {0, 1, 63, 64, 65, 511, 512, 513, 5000}) {
    for (unsigned density : {0u, 3u, 50u, 97u, 100u}) {
      BitVector bv = random_bits(rng, n, density);
      std::size_t ones = 0;
      for (std::size_t i = 0; i <= n; ++i) {
        CHECK(bv.rank1(i) == ones);
        if (i < n && bv[i]) {
          ++ones;
          CHECK(bv.select1(ones) == i);
        }
        if (i < n && !bv[i]) CHECK(bv.select0(i + 1 - ones) == i);
      }
      CHECK(bv.ones() == ones);
    }
  }
}

TEST_CASE("builder append and equality") {
  BitVectorBuilder a, b;
  a.append(true, 70);
  a.append(false, 3);
  for (int i = 0; i < 70; ++i) b.push_back(true);
  for (int i = 0; i < 3; ++i) b.push_back(false);
  BitVector x = std::move(a).build(), y = std::move(b).build();
  CHECK(x == y);
  CHECK(x.size() == 73);
  CHECK(x.ones() == 70);
  CHECK(BitVector(std::vector<std::uint64_t>(x.words().begin(), x.words().end()), 73) == x);
}

TEST_CASE("wavelet restrict matches a filtered scan") {
  std::mt19937_64 rng(5);
  for (unsigned levels : {0u, 1u, 3u, 5u}) {
    for (std::size_t n : {0, 1, 17, 300}) {
      std::vector<std::uint32_t> keys(n);
      for (auto& k : keys) k = levels ? static_cast<std::uint32_t>(rng() % (1u << levels)) : 0;
      WaveletTree wt(keys, levels);
      auto order = WaveletTree::leaf_order(keys);
      for (int trial = 0; trial < 200; ++trial) {
        std::size_t b = n ? rng() % (n + 1) : 0;
        std::size_t e = b + (n - b ? rng() % (n - b + 1) : 0);
        std::uint32_t key = levels ? static_cast<std::uint32_t>(rng() % (1u << levels)) : 0;
        auto [lb, le] = wt.restrict(b, e, key);
        std::vector<std::size_t> expect;
        for (std::size_t p = b; p < e; ++p)
          if (keys[p] == key) expect.push_back(p);
        REQUIRE(le - lb == expect.size());
        for (std::size_t k = 0; k < expect.size(); ++k) CHECK(order[lb + k] == expect[k]);
      }
      for (std::size_t p = 0; p < n; ++p) {
        auto [key, leaf] = wt.access(p);
        CHECK(key == keys[p]);
        CHECK(order[leaf] == p);
      }
    }
  }
}

TEST_CASE("wavelet tree survives level reassembly") {
  std::vector<std::uint32_t> keys{3, 1, 2, 3, 0, 1, 1};
  WaveletTree wt(keys, 2);
  WaveletTree copy(wt.level_bits(), wt.size());
  for (std::size_t p = 0; p < keys.size(); ++p) CHECK(copy.access(p) == wt.access(p));
}

TEST_CASE("range min/max against a scan") {
  std::mt19937_64 rng(9);
  for (std::size_t n : {1, 2, 63, 64, 65, 128, 1000}) {
    std::vector<std::uint32_t> v(n);
    for (auto& x : v) x = static_cast<std::uint32_t>(rng() % 50);
    RangeMinMax rm(v);
    for (int trial = 0; trial < 500; ++trial) {
      std::size_t l = rng() % n, r = l + rng() % (n - l);
      auto [lo, hi] = std::minmax_element(v.begin() + l, v.begin() + r + 1);
      CHECK(rm.min(l, r) == *lo);
      CHECK(rm.max(l, r) == *hi);
    }
    RangeMinMax copy(v, rm.tables());
    CHECK(copy.min(0, n - 1) == rm.min(0, n - 1));
    CHECK_THROWS_AS(RangeMinMax(std::vector<std::uint32_t>(n + 1), rm.tables()),
                    std::invalid_argument);
  }
}

TEST_CASE("range min/max space is linear") {
  for (std::size_t n : {1000, 10000, 100000}) {
    RangeMinMax rm(std::vector<std::uint32_t>(n, 7));
    CHECK(rm.space_words() <= 3 * n + 64);
  }
}

}
