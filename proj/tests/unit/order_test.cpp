#include <doctest.h>

#include <random>

#include "colexidx/colex.hpp"
#include "colexidx/oracle.hpp"
#include "colexidx/order.hpp"
#include "fixtures.hpp"

using namespace colexidx;

namespace {

PartialOrder total(std::size_t n) {
  Relation r(n);
  for (State u = 0; u + 1 < n; ++u) r.set(u, u + 1);
  return PartialOrder(transitive_reflexive_closure(r));
}

PartialOrder random_order(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Relation r(n);
  // Pairs only go from a lower to a higher id, so the closure is a poset.
  for (State u = 0; u < n; ++u)
    for (State v = u + 1; v < n; ++v)
      if (rng() % 4 == 0) r.set(u, v);
  return PartialOrder(transitive_reflexive_closure(r));
}

std::size_t brute_antichain(const PartialOrder& ord) {
  const std::size_t n = ord.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (State u = 0; u < n && ok; ++u)
      for (State v = u + 1; v < n && ok; ++v)
        if ((mask >> u & 1) && (mask >> v & 1) && ord.comparable(u, v)) ok = false;
    if (ok) best = std::max<std::size_t>(best, std::popcount(mask));
  }
  return best;
}

}  // namespace

TEST_SUITE("order") {

TEST_CASE("closure") {
  Relation r(3);
  r.set(0, 1);
  r.set(1, 2);
  Relation c = transitive_reflexive_closure(r);
  CHECK(c.test(0, 2));
  CHECK(c.is_reflexive());
  CHECK(transitive_reflexive_closure(c) == c);
}

TEST_CASE("acyclicity ignores self loops") {
  Relation r(3);
  r.set(0, 1);
  r.set(1, 0);
  CHECK_FALSE(is_acyclic(r));
  CHECK(is_acyclic(total(5).relation()));
  Relation loops = Relation::identity(3);
  CHECK(is_acyclic(loops));
}

TEST_CASE("partial order certificate") {
  Relation r(2);
  r.set(0, 1);
  CHECK_FALSE(PartialOrder::certify(r));
  CHECK_THROWS_AS(PartialOrder{r}, std::invalid_argument);
  CHECK(PartialOrder::certify(transitive_reflexive_closure(r)));
}

TEST_CASE("width, chains and antichains on simple orders") {
  CHECK(order_width(total(6)) == 1);
  CHECK(order_width(PartialOrder(Relation::identity(5))) == 5);
  CHECK(order_width(PartialOrder(Relation(0))) == 0);
  CHECK(max_antichain(total(4)).size() == 1);

  ChainPartition one = min_chain_partition(total(4));
  REQUIRE(one.num_chains() == 1);
  CHECK(one.chain(0) == std::vector<State>{0, 1, 2, 3});

  Relation two(6);
  two.set(0, 1), two.set(1, 2), two.set(3, 4), two.set(4, 5);
  ChainPartition cp = min_chain_partition(PartialOrder(transitive_reflexive_closure(two)));
  REQUIRE(cp.num_chains() == 2);
  CHECK(cp.chain(0) == std::vector<State>{0, 1, 2});
  CHECK(cp.chain(1) == std::vector<State>{3, 4, 5});
}

TEST_CASE("sample order: two chains split 3 and 4") {
  PartialOrder ord = build_triangle(colexidx::test::sample());
  ChainPartition cp = min_chain_partition(ord);
  CHECK(cp.num_chains() == 2);
  CHECK(cp.chain_of(3) != cp.chain_of(4));
  CHECK(cp.respects(ord));
  CHECK(max_antichain(ord) == StateSet{3, 4});

  CHECK_FALSE(is_convex(ord, std::vector<State>{0, 3}));
  CHECK(is_convex(ord, std::vector<State>{}));
  CHECK(is_convex(ord, std::vector<State>{0, 1, 2, 3, 4, 5, 6}));
}

TEST_CASE("L_4 antichain has four cycle states") {
  PartialOrder ord = build_triangle(gen_Lp(4));
  auto anti = max_antichain(ord);
  CHECK(anti.size() == 4);
  for (State q : anti) CHECK(q >= 1);
}

TEST_CASE("Dilworth duality on random orders") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 1 + seed % 14;
    PartialOrder ord = random_order(n, seed);
    const std::size_t w = order_width(ord);
    auto anti = max_antichain(ord);
    CHECK(anti.size() == w);
    for (State u : anti)
      for (State v : anti)
        if (u != v) CHECK_FALSE(ord.comparable(u, v));
    CHECK(brute_antichain(ord) == w);

    ChainPartition cp = min_chain_partition(ord);
    CHECK(cp.num_chains() == w);
    CHECK(cp.respects(ord));
    std::size_t covered = 0;
    for (const auto& chain : cp.chains()) covered += chain.size();
    CHECK(covered == n);
  }
}

TEST_CASE("chain partition rejects non-partitions") {
  CHECK_THROWS_AS(ChainPartition({{0, 1}, {1, 2}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(ChainPartition({{0, 1}}, 3), std::invalid_argument);
  ChainPartition cp({{2, 0}, {1}}, 3);
  CHECK(cp.chain_of(0) == 0);
  CHECK(cp.position_of(0) == 2);
  CHECK(cp.position_of(1) == 1);
}

TEST_CASE("convexity matches the definition") {
  PartialOrder ord = total(5);
  CHECK(is_convex(ord, std::vector<State>{1, 2, 3}));
  CHECK_FALSE(is_convex(ord, std::vector<State>{1, 3}));
  CHECK(is_convex(ord, std::vector<State>{4}));
}

}
