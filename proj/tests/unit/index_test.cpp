#include <doctest.h>

#include <random>

#include "colexidx/bench.hpp"
#include "colexidx/colex.hpp"
#include "colexidx/index.hpp"
#include "colexidx/oracle.hpp"
#include "colexidx/order.hpp"
#include "fixtures.hpp"

using namespace colexidx;
using colexidx::test::sample;

namespace {

PathIndex index_of(const Nfa& a) { return build_index(a, min_chain_partition(build_triangle(a))); }

StateSet decode(const PathIndex& idx, const IntervalTuple& iv) { return locate(idx, iv); }

}  // namespace

TEST_SUITE("index") {

TEST_CASE("sample index shape") {
  PathIndex idx = index_of(sample());
  CHECK(idx.num_chains() == 2);
  CHECK(idx.num_edges() == 9);
  std::size_t stored = 0;
  for (std::size_t i = 0; i < idx.num_chains(); ++i)
    for (std::uint32_t k = 1; k <= idx.chain_size(i); ++k) stored += idx.out_entries(i, k).size();
  CHECK(stored == 9);
  CHECK(count(idx, idx.full()) == 7);
  CHECK(count(idx, IntervalTuple::none(2)) == 0);
  CHECK(locate(idx, IntervalTuple::none(2)).empty());
}

TEST_CASE("OUT entries reproduce the edges") {
  Nfa a = sample();
  ChainPartition cp = min_chain_partition(build_triangle(a));
  PathIndex idx = build_index(a, cp);
  std::vector<Edge> seen;
  for (std::size_t i = 0; i < cp.num_chains(); ++i)
    for (std::uint32_t k = 1; k <= cp.chain(i).size(); ++k)
      for (const OutEntry& e : idx.out_entries(i, k))
        seen.push_back({cp.chain(i)[k - 1], cp.chain(e.chain)[e.position - 1], e.label});
  std::sort(seen.begin(), seen.end());
  CHECK(seen == a.edges());
}

TEST_CASE("extension on the sample automaton") {
  Nfa a = sample();
  PathIndex idx = index_of(a);
  auto by_a = extend(idx, idx.full(), a.encode('a'));
  CHECK(decode(idx, by_a) == StateSet{1});
  CHECK(extend_fast(idx, idx.full(), a.encode('a')) == by_a);
  auto x = match_anywhere(idx, "x");
  CHECK(decode(idx, x) == StateSet{3, 4});
  CHECK(decode(idx, extend(idx, x, a.encode('y'))) == StateSet{5});
  CHECK(extend(idx, IntervalTuple::none(2), 1) == IntervalTuple::none(2));
  CHECK(extend_fast(idx, IntervalTuple::none(2), 1) == IntervalTuple::none(2));
  CHECK(extend_fast(idx, idx.full(), kUnknownSymbol).empty());
  CHECK(extend(idx, idx.full(), kSentinel).empty());
}

TEST_CASE("queries on the sample automaton") {
  PathIndex idx = index_of(sample());
  CHECK(count(idx, match_anywhere(idx, "x")) == 2);
  CHECK(locate(idx, match_anywhere(idx, "x")) == StateSet{3, 4});
  CHECK(match_anywhere(idx, "") == idx.full());
  CHECK(match_anywhere(idx, "zz").empty());
  CHECK(locate(idx, match_from_start(idx, "ax")) == StateSet{3, 4});
  CHECK(locate(idx, match_from_start(idx, "")) == StateSet{0});
  CHECK(locate(idx, match_from_start(idx, "bx")) == StateSet{4});
  CHECK(locate(idx, match_from_start(idx, "axxy")) == StateSet{5});
  CHECK(is_member(idx, "axy"));
  CHECK_FALSE(is_member(idx, "ax"));
  CHECK_FALSE(is_member(idx, "a?y"));
  CHECK(match_anywhere(idx, "x!").empty());
}

TEST_CASE("small fixtures") {
  SUBCASE("single state") {
    PathIndex idx = index_of(parse_nfa("states 1\ninitial 0\nfinal 0\n"));
    CHECK(idx.num_chains() == 1);
    CHECK(idx.num_edges() == 0);
    CHECK(is_member(idx, ""));
    CHECK_FALSE(is_member(idx, "a"));
  }
  SUBCASE("L_3") {
    Dfa lp = gen_Lp(3);
    PathIndex idx = index_of(lp);
    CHECK(idx.sigma() == 1);
    CHECK(is_member(idx, "aaa"));
    CHECK_FALSE(is_member(idx, "aa"));
  }
  SUBCASE("L_4 stores only a-edges") {
    PathIndex idx = index_of(gen_Lp(4));
    for (std::size_t i = 0; i < idx.num_chains(); ++i)
      for (std::uint32_t k = 1; k <= idx.chain_size(i); ++k)
        for (const OutEntry& e : idx.out_entries(i, k)) CHECK(e.label == 1);
  }
}

TEST_CASE("build rejects a mismatched partition") {
  ChainPartition cp({{0, 1}}, 2);
  CHECK_THROWS_AS(build_index(sample(), cp), std::invalid_argument);
}

TEST_CASE("index agrees with the oracles on random automata") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Nfa a = gen_random_nfa({.states = 10, .labels = 3, .density = 1.5, .seed = seed});
    PathIndex idx = index_of(a);
    for (int trial = 0; trial < 150; ++trial) {
      Word w(rng() % 7);
      for (auto& c : w) c = static_cast<Symbol>(1 + rng() % a.sigma());
      CHECK(decode(idx, match_anywhere(idx, w)) == naive_B(a, w));
      const State s[] = {a.initial()};
      CHECK(decode(idx, match_from_start(idx, w)) == run(a, s, w));
      CHECK(is_member(idx, w) == accepts(a, w));
      IntervalTuple iv = idx.full();
      for (Symbol c : w) {
        auto slow = extend(idx, iv, c);
        auto fast = extend_fast(idx, iv, c);
        REQUIRE(slow == fast);
        iv = fast;
      }
    }
  }
}

TEST_CASE("space is linear in the automaton") {
  for (std::size_t n : {100, 1000, 10000}) {
    Dfa trie = gen_random_trie(n, 4, n);
    auto order = colex_sort_trie(trie);
    PathIndex idx = build_index(trie, round_robin_chains(order, 4));
    CHECK(idx.space_words() <= 16 * (n + trie.nfa().num_edges()) + 256);
  }
}

TEST_CASE("trie co-lex sort gives a co-lex order") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Dfa trie = gen_random_trie(40, 3, seed);
    auto order = colex_sort_trie(trie);
    Relation r(order.size());
    for (std::size_t k = 0; k + 1 < order.size(); ++k) r.set(order[k], order[k + 1]);
    PartialOrder ord(transitive_reflexive_closure(r));
    CHECK(check_colex(trie, ord).ok());
  }
}

TEST_CASE("serialization round trip") {
  Nfa a = sample();
  PathIndex idx = index_of(a);
  auto bytes = serialize(idx);
  PathIndex back = deserialize(bytes);
  CHECK(serialize(back) == bytes);
  for (const char* p : {"", "x", "ax", "axxy", "bxz", "xx", "q"}) {
    CHECK(match_anywhere(back, p) == match_anywhere(idx, p));
    CHECK(is_member(back, p) == is_member(idx, p));
  }
}

TEST_CASE("serialization errors") {
  auto bytes = serialize(index_of(sample()));
  auto kind_of = [](std::vector<std::uint8_t> b) {
    try {
      deserialize(b);
    } catch (const FormatError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  using K = FormatError::Kind;
  CHECK(kind_of({}) == static_cast<int>(K::kTruncated));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(kind_of(bad_magic) == static_cast<int>(K::kVersionMismatch));
  auto bad_version = bytes;
  bad_version[4] = 9;
  CHECK(kind_of(bad_version) == static_cast<int>(K::kVersionMismatch));
  auto cut = bytes;
  cut.resize(bytes.size() / 2);
  CHECK(kind_of(cut) == static_cast<int>(K::kTruncated));
  auto flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  CHECK(kind_of(flipped) == static_cast<int>(K::kChecksum));
  auto longer = bytes;
  longer.push_back(0);
  CHECK(kind_of(longer) == static_cast<int>(K::kCorrupt));
}

}
