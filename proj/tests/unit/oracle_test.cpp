#include <doctest.h>

#include <numeric>
#include <random>

#include "colexidx/colex.hpp"
#include "colexidx/oracle.hpp"
#include "colexidx/order.hpp"
#include "fixtures.hpp"

using namespace colexidx;
using colexidx::test::sample;

TEST_SUITE("oracle") {

TEST_CASE("naive_B on the sample automaton") {
  Nfa a = sample();
  CHECK(naive_B(a, a.encode("x")) == StateSet{3, 4});
  CHECK(naive_B(a, a.encode("bx")) == StateSet{4});
  CHECK(naive_B(a, Word{}).size() == 7);
  CHECK(naive_B(a, a.encode("xy")) == StateSet{5});
}

TEST_CASE("the two brute forces agree") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Nfa a = gen_random_nfa({.states = 8, .labels = 2, .density = 1.5, .seed = seed});
    for_each_word(a.sigma(), 5, [&](std::span<const Symbol> w) {
      CHECK(naive_B(a, w) == naive_B_dp(a, w));
    });
  }
}

TEST_CASE("enumerator on fixtures") {
  SUBCASE("two-state cycle relates nothing on the cycle") {
    auto orders = enumerate_colex_orders(gen_cycle(2));
    REQUIRE_FALSE(orders.empty());
    for (const auto& ord : orders) CHECK_FALSE(ord.comparable(1, 2));
  }
  SUBCASE("distinct-label path has exactly the forced total order") {
    Nfa path = parse_nfa("states 3\ninitial 0\nfinal 2\nedge 0 1 a\nedge 1 2 b\n");
    auto orders = enumerate_colex_orders(path);
    REQUIRE(orders.size() == 1);
    CHECK(order_width(orders[0]) == 1);
    CHECK(exact_width(path) == 1);
  }
  SUBCASE("sample: width 2 reachable, width 1 not") {
    std::size_t best = 99;
    for_each_colex_order(sample(), {.max_states = 7}, [&](const PartialOrder& ord) {
      best = std::min(best, order_width(ord));
    });
    CHECK(best == 2);
    CHECK(exact_width(sample(), {.max_states = 7}) == 2);
  }
  SUBCASE("3-cycle needs width 3") { CHECK(exact_width(gen_cycle(3)) == 3); }
}

TEST_CASE("budgets are hard limits") {
  CHECK_THROWS_AS(exact_width(sample()), BudgetExceeded);
  CHECK_THROWS_AS(exact_width(gen_cycle(3), {.max_orders = 0}), BudgetExceeded);
}

TEST_CASE("every enumerated order is co-lex and one always exists") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Nfa a = gen_random_nfa({.states = 5, .labels = 2, .density = 1.0, .seed = seed});
    std::size_t found = 0;
    for_each_colex_order(a, {}, [&](const PartialOrder& ord) {
      ++found;
      CHECK(check_colex(a, ord).ok());
    });
    CHECK(found >= 1);
  }
}

TEST_CASE("enumerator is exhaustive on tiny automata") {
  // Compare against filtering every strict relation on three or four states.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Nfa a = gen_random_nfa({.states = 4, .labels = 2, .density = 1.0, .seed = seed});
    const std::size_t n = a.num_states();
    std::vector<std::pair<State, State>> cells;
    for (State u = 0; u < n; ++u)
      for (State v = 0; v < n; ++v)
        if (u != v) cells.emplace_back(u, v);
    std::size_t brute = 0;
    for (std::uint32_t mask = 0; mask < (1u << cells.size()); ++mask) {
      Relation r = Relation::identity(n);
      for (std::size_t k = 0; k < cells.size(); ++k)
        if (mask >> k & 1) r.set(cells[k].first, cells[k].second);
      auto ord = PartialOrder::certify(r);
      if (ord && check_colex(a, *ord).ok()) ++brute;
    }
    CHECK(enumerate_colex_orders(a).size() == brute);
  }
}

TEST_CASE("generators") {
  SUBCASE("L_p membership") {
    for (std::size_t p = 1; p <= 5; ++p) {
      Dfa lp = gen_Lp(p);
      CHECK(validate(lp).ok());
      for (std::size_t len = 0; len <= 4 * p; ++len)
        CHECK(accepts(lp, Word(len, 1)) == (len % p == 0));
    }
    CHECK_THROWS_AS(gen_Lp(0), std::invalid_argument);
  }
  SUBCASE("primes membership") {
    std::vector<std::size_t> primes{2, 3};
    Nfa a = gen_primes_nfa(primes);
    CHECK(a.num_states() == 6);
    CHECK(validate(a).ok());
    for (std::size_t len = 0; len <= 24; ++len)
      CHECK(accepts(a, Word(len, 1)) == (len % 2 == 0 || len % 3 == 0));
    std::vector<std::size_t> bad{2, 2};
    CHECK_THROWS_AS(gen_primes_nfa(bad), std::invalid_argument);
    std::vector<std::size_t> composite{4};
    CHECK_THROWS_AS(gen_primes_nfa(composite), std::invalid_argument);
  }
  SUBCASE("single prime matches L_2") {
    std::vector<std::size_t> two{2};
    Nfa a = gen_primes_nfa(two);
    Dfa b = gen_Lp(2);
    for (std::size_t len = 0; len <= 12; ++len)
      CHECK(accepts(a, Word(len, 1)) == accepts(b, Word(len, 1)));
  }
  SUBCASE("cycle") {
    Nfa c = gen_cycle(4);
    CHECK(c.num_states() == 5);
    CHECK(validate(c).ok());
  }
  SUBCASE("random is seed-deterministic and valid") {
    CHECK(gen_random_nfa({.seed = 42}) == gen_random_nfa({.seed = 42}));
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
      CHECK(validate(gen_random_nfa({.states = 5, .seed = seed})).ok());
    for (std::uint64_t seed = 0; seed < 200; ++seed)
      CHECK(gen_random_nfa({.states = 6, .seed = seed, .deterministic = true})
                .is_deterministic());
  }
}

TEST_CASE("order width never exceeds the exact width") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Nfa a = gen_random_nfa({.states = 5, .labels = 2, .density = 1.0, .seed = seed});
    CHECK(order_width(build_triangle(a)) <= exact_width(a));
  }
}

TEST_CASE("word enumeration") {
  std::size_t words = 0;
  for_each_word(2, 3, [&](std::span<const Symbol>) { ++words; });
  CHECK(words == 1 + 2 + 4 + 8);
  CHECK(colex_less(Word{2, 1}, Word{1, 2}));
  CHECK(colex_less(Word{1}, Word{2, 1}));
  CHECK_FALSE(colex_less(Word{1}, Word{1}));
}

}
