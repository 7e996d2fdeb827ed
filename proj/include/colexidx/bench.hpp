#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "colexidx/automaton.hpp"
#include "colexidx/index.hpp"
#include "colexidx/order.hpp"

namespace colexidx {

/// Random trie: each new state hangs under a parent drawn from the last
/// `window` states (so the trie gets deep), on a label not yet used by that
/// parent. Leaves are final. Deterministic in `seed`.
Dfa gen_random_trie(std::size_t states, std::size_t labels, std::uint64_t seed,
                    std::size_t window = 8);

/// States of a trie sorted co-lexicographically by the string that reaches
/// them (prefix doubling over ancestor ranks). Throws std::invalid_argument
/// if some state has more than one predecessor.
std::vector<State> colex_sort_trie(const Nfa& trie);

/// Deals a total order into t chains round-robin; every chain stays sorted.
ChainPartition round_robin_chains(std::span<const State> total_order, std::size_t t);

/// `count` patterns of exactly `length` symbols, each the last `length`
/// labels on the path to a random state at depth >= length. Empty if the trie
/// is too shallow.
std::vector<Word> random_trie_patterns(const Nfa& trie, std::size_t count, std::size_t length,
                                       std::uint64_t seed);

struct BenchRow {
  std::uint64_t seed = 0;
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t t = 0;
  std::size_t pattern_len = 0;
  double ns_per_char = 0;
};

/// Average match_anywhere cost per pattern character, repeating the batch
/// until at least `min_seconds` of work has been timed.
double time_per_char(const PathIndex& idx, std::span<const Word> patterns,
                     double min_seconds = 0.05);

/// Builds the trie workload for (states, t) and times it.
BenchRow bench_trie(std::size_t states, std::size_t t, std::size_t patterns,
                    std::size_t pattern_len, std::uint64_t seed, double min_seconds = 0.05);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

}  // namespace colexidx
