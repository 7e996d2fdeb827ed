#include "colexidx/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "colexidx/order.hpp"

namespace colexidx {

StateSet naive_B(const Nfa& a, std::span<const Symbol> pattern) {
  StateSet all(a.num_states());
  for (State q = 0; q < a.num_states(); ++q) all[q] = q;
  return run(a, all, pattern);
}

StateSet naive_B_dp(const Nfa& a, std::span<const Symbol> pattern) {
  // ends[v] after step k: some path reading pattern[0..k) ends at v.
  std::vector<std::uint8_t> ends(a.num_states(), 1), next(a.num_states());
  for (Symbol c : pattern) {
    std::fill(next.begin(), next.end(), 0);
    for (const Edge& e : a.edges())
      if (e.label == c && ends[e.source]) next[e.target] = 1;
    ends.swap(next);
  }
  StateSet out;
  for (State q = 0; q < a.num_states(); ++q)
    if (ends[q]) out.push_back(q);
  return out;
}

namespace {

// Backtracking over unordered state pairs. Each pair is decided as u < v,
// v < u or incomparable; every decision is closed under transitivity and the
// backward axiom immediately, so a conflict prunes the whole subtree.
class Enumerator {
 public:
  Enumerator(const Nfa& a, const EnumerationBudget& budget,
             const std::function<void(const PartialOrder&)>& visit)
      : a_(a), budget_(budget), visit_(visit), n_(a.num_states()) {
    for (State u = 0; u < n_; ++u)
      for (State v = u + 1; v < n_; ++v) pairs_.emplace_back(u, v);
  }

  void run() {
    Masks m{std::vector<std::uint32_t>(n_, 0), std::vector<std::uint32_t>(n_, 0)};
    for (State u = 0; u < n_; ++u)
      for (State v = 0; v < n_; ++v)
        if (a_.label(u) < a_.label(v) && !add(m, u, v)) return;
    search(m, 0);
  }

 private:
  struct Masks {
    std::vector<std::uint32_t> less;    // less[u] bit v: u < v
    std::vector<std::uint32_t> forbid;  // forbid[u] bit v: u < v ruled out
  };

  static bool has(const std::vector<std::uint32_t>& m, State u, State v) {
    return (m[u] >> v) & 1u;
  }

  bool add(Masks& m, State x, State y) {
    std::vector<std::pair<State, State>> work{{x, y}};
    while (!work.empty()) {
      auto [u, v] = work.back();
      work.pop_back();
      if (has(m.less, u, v)) continue;
      if (u == v || has(m.less, v, u) || has(m.forbid, u, v)) return false;
      m.less[u] |= 1u << v;
      for (State w = 0; w < n_; ++w) {
        bool below = w == u || has(m.less, w, u);
        if (!below) continue;
        for (State z = 0; z < n_; ++z)
          if ((z == v || has(m.less, v, z)) && !has(m.less, w, z)) work.emplace_back(w, z);
      }
      if (a_.label(u) == a_.label(v)) {
        for (State up : a_.predecessors(u))
          for (State vp : a_.predecessors(v))
            if (up != vp) work.emplace_back(up, vp);
      }
    }
    return true;
  }

  void search(Masks& m, std::size_t k) {
    while (k < pairs_.size()) {
      auto [u, v] = pairs_[k];
      if (has(m.less, u, v) || has(m.less, v, u)) {
        ++k;
        continue;
      }
      if (has(m.forbid, u, v) && has(m.forbid, v, u)) {
        ++k;
        continue;
      }
      break;
    }
    if (k == pairs_.size()) {
      emit(m);
      return;
    }
    auto [u, v] = pairs_[k];
    for (auto [x, y] : {std::pair{u, v}, std::pair{v, u}}) {
      if (has(m.forbid, x, y)) continue;
      Masks next = m;
      if (add(next, x, y)) search(next, k + 1);
    }
    Masks next = m;
    next.forbid[u] |= 1u << v;
    next.forbid[v] |= 1u << u;
    search(next, k + 1);
  }

  void emit(const Masks& m) {
    if (++emitted_ > budget_.max_orders)
      throw BudgetExceeded("more than " + std::to_string(budget_.max_orders) + " co-lex orders");
    Relation rel = Relation::identity(n_);
    for (State u = 0; u < n_; ++u)
      for (State v = 0; v < n_; ++v)
        if (has(m.less, u, v)) rel.set(u, v);
    visit_(PartialOrder(std::move(rel)));
  }

  const Nfa& a_;
  const EnumerationBudget& budget_;
  const std::function<void(const PartialOrder&)>& visit_;
  std::size_t n_;
  std::vector<std::pair<State, State>> pairs_;
  std::size_t emitted_ = 0;
};

}  // namespace

void for_each_colex_order(const Nfa& a, const EnumerationBudget& budget,
                          const std::function<void(const PartialOrder&)>& visit) {
  if (a.num_states() > budget.max_states || a.num_states() > 32)
    throw BudgetExceeded("automaton has " + std::to_string(a.num_states()) +
                         " states; enumeration budget is " +
                         std::to_string(budget.max_states));
  require_valid(a);
  Enumerator(a, budget, visit).run();
}

std::vector<PartialOrder> enumerate_colex_orders(const Nfa& a, const EnumerationBudget& budget) {
  std::vector<PartialOrder> out;
  for_each_colex_order(a, budget, [&](const PartialOrder& ord) { out.push_back(ord); });
  return out;
}

std::size_t exact_width(const Nfa& a, const EnumerationBudget& budget) {
  std::size_t best = a.num_states();
  for_each_colex_order(a, budget,
                       [&](const PartialOrder& ord) { best = std::min(best, order_width(ord)); });
  return best;
}

bool colex_less(std::span<const Symbol> x, std::span<const Symbol> y) {
  return std::lexicographical_compare(x.rbegin(), x.rend(), y.rbegin(), y.rend());
}

std::vector<std::vector<Word>> strings_reaching(const Nfa& a, std::size_t max_len) {
  std::vector<std::set<Word>> sets(a.num_states());
  std::vector<std::pair<State, Word>> frontier{{a.initial(), {}}};
  sets[a.initial()].insert({});
  for (std::size_t len = 0; len < max_len; ++len) {
    std::vector<std::pair<State, Word>> next;
    for (const auto& [q, w] : frontier) {
      for (const Edge& e : a.out_edges(q)) {
        Word x = w;
        x.push_back(e.label);
        if (sets[e.target].insert(x).second) next.emplace_back(e.target, std::move(x));
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<Word>> out;
  for (auto& s : sets) out.emplace_back(s.begin(), s.end());
  return out;
}

void for_each_word(std::size_t sigma, std::size_t max_len,
                   const std::function<void(std::span<const Symbol>)>& visit) {
  Word w;
  visit(w);
  if (sigma == 0) return;
  for (std::size_t len = 1; len <= max_len; ++len) {
    w.assign(len, 1);
    while (true) {
      visit(w);
      std::size_t k = len;
      while (k > 0 && w[k - 1] == sigma) w[--k] = 1;
      if (k == 0) break;
      ++w[k - 1];
    }
  }
}

Dfa gen_Lp(std::size_t p) {
  if (p == 0) throw std::invalid_argument("gen_Lp needs p >= 1");
  NfaBuilder b(p + 1, 0);
  b.add_final(0).add_final(static_cast<State>(p));
  for (State i = 0; i < p; ++i) b.add_edge(i, i + 1, 'a');
  b.add_edge(static_cast<State>(p), 1, 'a');
  return Dfa(b.build());
}

Nfa gen_primes_nfa(std::span<const std::size_t> primes) {
  if (primes.empty()) throw std::invalid_argument("gen_primes_nfa needs at least one prime");
  std::vector<std::size_t> sorted(primes.begin(), primes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("primes must be distinct");
  std::size_t total = 1;
  for (std::size_t p : primes) {
    bool prime = p >= 2;
    for (std::size_t d = 2; d * d <= p && prime; ++d) prime = p % d != 0;
    if (!prime) throw std::invalid_argument(std::to_string(p) + " is not prime");
    total += p;
  }
  NfaBuilder b(total, 0);
  b.add_final(0);
  State base = 1;
  for (std::size_t p : primes) {
    const State last = base + static_cast<State>(p) - 1;
    b.add_edge(0, base, 'a');
    for (State q = base; q < last; ++q) b.add_edge(q, q + 1, 'a');
    b.add_edge(last, base, 'a');
    b.add_final(last);
    base = last + 1;
  }
  return b.build();
}

Nfa gen_cycle(std::size_t m) {
  if (m == 0) throw std::invalid_argument("gen_cycle needs m >= 1");
  NfaBuilder b(m + 1, 0);
  b.add_edge(0, 1, 'a');
  for (State i = 0; i < m; ++i) b.add_edge(1 + i, 1 + static_cast<State>((i + 1) % m), 'a');
  b.add_final(static_cast<State>(m));
  return b.build();
}

Nfa gen_random_nfa(const RandomNfaParams& params) {
  if (params.states == 0 || params.labels == 0 || params.labels > 26)
    throw std::invalid_argument("gen_random_nfa needs states >= 1 and 1..26 labels");
  const std::size_t n = params.states, sigma = params.labels;
  // Modulo draws keep the output identical across standard libraries.
  std::mt19937_64 rng(params.seed);
  auto draw = [&](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::size_t> label(n, 0);
    std::vector<std::uint8_t> slot(n * sigma, 0), has_child(n, 0);
    struct E {
      State u, v;
    };
    std::vector<E> edges;
    for (State q = 1; q < n; ++q) {
      std::size_t parent = 0;
      if (params.deterministic) {
        std::vector<std::size_t> free;
        for (std::size_t k = 0; k < q * sigma; ++k)
          if (!slot[k]) free.push_back(k);
        std::size_t pick = free[draw(free.size())];
        parent = pick / sigma;
        label[q] = pick % sigma;
      } else {
        parent = draw(q);
        label[q] = draw(sigma);
      }
      slot[parent * sigma + label[q]] = 1;
      has_child[parent] = 1;
      edges.push_back({static_cast<State>(parent), q});
    }
    if (n > 1) {
      const auto extra = static_cast<std::size_t>(std::llround(params.density * double(n)));
      for (std::size_t k = 0; k < extra; ++k) {
        auto u = static_cast<State>(draw(n));
        auto v = static_cast<State>(1 + draw(n - 1));
        if (params.deterministic && slot[u * sigma + label[v]]) continue;
        slot[u * sigma + label[v]] = 1;
        edges.push_back({u, v});
      }
    }

    NfaBuilder b(n, 0);
    std::vector<char> alphabet;
    for (std::size_t c = 0; c < sigma; ++c) alphabet.push_back(static_cast<char>('a' + c));
    b.declare_alphabet(alphabet);
    for (State q = 0; q < n; ++q) {
      bool coin = draw(100) < 35;
      if (coin || !has_child[q]) b.add_final(q);
    }
    for (const E& e : edges) b.add_edge(e.u, e.v, static_cast<char>('a' + label[e.v]));
    auto trimmed = trim(b.build());
    if (!trimmed) continue;
    auto out = make_input_consistent(*trimmed);
    if (validate(out).ok()) return out;
  }
  throw std::runtime_error("gen_random_nfa gave up after 100 attempts");
}

}  // namespace colexidx
