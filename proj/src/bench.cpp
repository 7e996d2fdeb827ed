#include "colexidx/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

namespace colexidx {

Dfa gen_random_trie(std::size_t states, std::size_t labels, std::uint64_t seed,
                    std::size_t window) {
  if (states == 0 || labels == 0 || labels > 26 || window == 0)
    throw std::invalid_argument("gen_random_trie needs states, labels in 1..26 and a window");
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> taken(states, 0);  // label bitmask per parent
  auto free_labels = [&](State p) {
    return labels - static_cast<std::size_t>(std::popcount(taken[p]));
  };
  std::vector<std::uint8_t> leaf(states, 1);
  NfaBuilder b(states, 0);
  std::vector<char> alphabet;
  for (std::size_t c = 0; c < labels; ++c) alphabet.push_back(static_cast<char>('a' + c));
  b.declare_alphabet(alphabet);
  for (State q = 1; q < states; ++q) {
    const std::size_t lo = q > window ? q - window : 0;
    State parent = 0;
    // A parent with a free label exists among the window unless it is full;
    // fall back to scanning downwards.
    bool found = false;
    for (int tries = 0; tries < 16 && !found; ++tries) {
      parent = static_cast<State>(lo + rng() % (q - lo));
      found = free_labels(parent) > 0;
    }
    for (State p = q; !found && p-- > 0;) {
      if (free_labels(p) > 0) {
        parent = p;
        found = true;
      }
    }
    std::size_t pick = rng() % free_labels(parent), c = 0;
    for (;; ++c)
      if (!((taken[parent] >> c) & 1u) && pick-- == 0) break;
    taken[parent] |= 1u << c;
    b.add_edge(parent, q, static_cast<char>('a' + c));
    leaf[parent] = 0;
  }
  for (State q = 0; q < states; ++q)
    if (leaf[q]) b.add_final(q);
  return Dfa(b.build());
}

std::vector<State> colex_sort_trie(const Nfa& trie) {
  const std::size_t n = trie.num_states();
  std::vector<std::int64_t> parent(n, -1);
  for (State q = 0; q < n; ++q) {
    auto preds = trie.predecessors(q);
    if (preds.size() > 1) throw std::invalid_argument("not a trie: state with two parents");
    if (!preds.empty()) parent[q] = preds[0];
  }
  // rank[q] ranks the first k symbols of the reversed string of q; the root
  // (empty string) is the unique rank 0 and doubles as "nothing left".
  std::vector<std::uint64_t> rank(n);
  for (State q = 0; q < n; ++q) rank[q] = trie.label(q);
  std::vector<std::int64_t> anc = parent;
  std::vector<State> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = 1;; k *= 2) {
    auto key = [&](State q) {
      std::uint64_t second = anc[q] < 0 ? 0 : rank[static_cast<State>(anc[q])];
      return std::pair{rank[q], second};
    };
    std::sort(order.begin(), order.end(), [&](State x, State y) { return key(x) < key(y); });
    std::vector<std::uint64_t> next(n);
    std::uint64_t distinct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && key(order[i]) != key(order[i - 1])) ++distinct;
      next[order[i]] = distinct;
    }
    rank = std::move(next);
    if (distinct + 1 == n || k >= n) break;
    std::vector<std::int64_t> up(n, -1);
    for (State q = 0; q < n; ++q)
      if (anc[q] >= 0) up[q] = anc[static_cast<State>(anc[q])];
    anc = std::move(up);
  }
  return order;
}

ChainPartition round_robin_chains(std::span<const State> total_order, std::size_t t) {
  if (t == 0) throw std::invalid_argument("need at least one chain");
  t = std::min(t, total_order.size());
  std::vector<std::vector<State>> chains(t);
  for (std::size_t i = 0; i < total_order.size(); ++i) chains[i % t].push_back(total_order[i]);
  return ChainPartition(std::move(chains), total_order.size());
}

std::vector<Word> random_trie_patterns(const Nfa& trie, std::size_t count, std::size_t length,
                                       std::uint64_t seed) {
  const std::size_t n = trie.num_states();
  std::vector<std::size_t> depth(n, 0);
  std::vector<State> parent(n, 0);
  // Parents precede children in a generated trie, but do not rely on it.
  std::vector<State> queue{trie.initial()};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    for (const Edge& e : trie.out_edges(queue[h])) {
      depth[e.target] = depth[queue[h]] + 1;
      parent[e.target] = queue[h];
      queue.push_back(e.target);
    }
  }
  std::vector<State> deep;
  for (State q = 0; q < n; ++q)
    if (depth[q] >= length) deep.push_back(q);
  std::vector<Word> out;
  if (deep.empty()) return out;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    State q = deep[rng() % deep.size()];
    Word w(length);
    for (std::size_t i = length; i-- > 0;) {
      w[i] = trie.label(q);
      q = parent[q];
    }
    out.push_back(std::move(w));
  }
  return out;
}

double time_per_char(const PathIndex& idx, std::span<const Word> patterns, double min_seconds) {
  std::size_t chars = 0;
  for (const Word& w : patterns) chars += w.size();
  if (chars == 0) return 0;
  using Clock = std::chrono::steady_clock;
  std::size_t total_chars = 0;
  volatile std::size_t sink = 0;
  const auto start = Clock::now();
  double elapsed = 0;
  do {
    for (const Word& w : patterns) sink = sink + count(idx, match_anywhere(idx, w));
    total_chars += chars;
    elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  } while (elapsed < min_seconds);
  return elapsed * 1e9 / static_cast<double>(total_chars);
}

BenchRow bench_trie(std::size_t states, std::size_t t, std::size_t patterns,
                    std::size_t pattern_len, std::uint64_t seed, double min_seconds) {
  Dfa trie = gen_random_trie(states, 4, seed);
  auto order = colex_sort_trie(trie);
  auto cp = round_robin_chains(order, t);
  PathIndex idx = build_index(trie, cp);
  auto words = random_trie_patterns(trie, patterns, pattern_len, seed ^ 0x9e3779b97f4a7c15ULL);
  BenchRow row;
  row.seed = seed;
  row.states = trie.nfa().num_states();
  row.edges = trie.nfa().num_edges();
  row.t = cp.num_chains();
  row.pattern_len = pattern_len;
  row.ns_per_char = time_per_char(idx, words, min_seconds);
  return row;
}

std::string bench_csv_header() { return "seed,states,edges,t,pattern_len,ns_per_char"; }

std::string bench_csv_row(const BenchRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu,%zu,%zu,%zu,%zu,%.2f",
                static_cast<unsigned long long>(row.seed), row.states, row.edges, row.t,
                row.pattern_len, row.ns_per_char);
  return buf;
}

}  // namespace colexidx
