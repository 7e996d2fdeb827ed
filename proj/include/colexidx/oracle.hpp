#pragma once

// Brute-force reference implementations and fixture generators. Everything
// here is exponential or quadratic on purpose; use only on small inputs.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "colexidx/automaton.hpp"
#include "colexidx/relation.hpp"

namespace colexidx {

/// States reached by some path whose label ends with `pattern`, as the union
/// of run() from every state.
StateSet naive_B(const Nfa& a, std::span<const Symbol> pattern);
/// The same set computed independently, position by position over the edge
/// list.
StateSet naive_B_dp(const Nfa& a, std::span<const Symbol> pattern);

struct EnumerationBudget {
  std::size_t max_states = 5;
  std::size_t max_pattern_length = 8;
  std::size_t max_orders = 1'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Calls `visit` once for every partial order on a's states satisfying both
/// co-lex axioms. Throws BudgetExceeded when the automaton is larger than
/// budget.max_states or more than budget.max_orders orders exist.
void for_each_colex_order(const Nfa& a, const EnumerationBudget& budget,
                          const std::function<void(const PartialOrder&)>& visit);
std::vector<PartialOrder> enumerate_colex_orders(const Nfa& a,
                                                 const EnumerationBudget& budget = {});

/// Smallest width over all co-lex orders.
std::size_t exact_width(const Nfa& a, const EnumerationBudget& budget = {});

/// Co-lexicographic comparison: compare from the last symbol backwards, a
/// proper suffix first.
bool colex_less(std::span<const Symbol> x, std::span<const Symbol> y);

/// For every state u, the strings of length <= max_len labelling a path from
/// the initial state to u, each list sorted and duplicate-free.
std::vector<std::vector<Word>> strings_reaching(const Nfa& a, std::size_t max_len);

/// Calls `visit` on every word over 1..sigma of length <= max_len, shortest
/// first.
void for_each_word(std::size_t sigma, std::size_t max_len,
                   const std::function<void(std::span<const Symbol>)>& visit);

/// u0 -a-> u1 -a-> ... -a-> up -a-> u1, finals {u0, up}: the multiples of p.
Dfa gen_Lp(std::size_t p);
/// Initial u0 (final) with one a-cycle of length p per prime, entered from
/// u0, whose last state is final. Throws std::invalid_argument unless the
/// list is non-empty and holds distinct primes.
Nfa gen_primes_nfa(std::span<const std::size_t> primes);
/// s -a-> c0 -a-> c1 ... -a-> c(m-1) -a-> c0, c(m-1) final.
Nfa gen_cycle(std::size_t m);

struct RandomNfaParams {
  std::size_t states = 5;
  std::size_t labels = 2;
  // Extra edges beyond the spanning tree, per state.
  double density = 1.0;
  std::uint64_t seed = 0;
  bool deterministic = false;
};

/// Seeded random automaton that passes validate(). Every state gets a fixed
/// incoming label, a random spanning tree makes all states reachable, extra
/// edges follow `density`, and tree leaves are final. May come out with fewer
/// states than requested after trimming.
Nfa gen_random_nfa(const RandomNfaParams& params);

}  // namespace colexidx
