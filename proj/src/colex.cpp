#include "colexidx/colex.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "colexidx/order.hpp"

namespace colexidx {

ColexCertificate check_colex(const Nfa& a, const PartialOrder& ord) {
  const std::size_t n = a.num_states();
  if (ord.size() != n) throw std::invalid_argument("order and automaton sizes differ");
  for (State u = 0; u < n; ++u)
    for (State v = 0; v < n; ++v)
      if (a.label(u) < a.label(v) && !ord.less(u, v)) return {ColexViolation{1, u, v, 0, 0}};
  for (State u = 0; u < n; ++u) {
    for (State v = 0; v < n; ++v) {
      if (!ord.less(u, v) || a.label(u) != a.label(v)) continue;
      for (State up : a.predecessors(u))
        for (State vp : a.predecessors(v))
          if (!ord.leq(up, vp)) return {ColexViolation{2, u, v, up, vp}};
    }
  }
  return {};
}

namespace {

std::optional<Relation> closure_unchecked(const Nfa& a, State u, State v,
                                          const ClosureOptions& options) {
  const std::size_t n = a.num_states();
  Relation rho(n);
  std::vector<std::pair<State, State>> stack;
  rho.set(u, v);
  stack.emplace_back(u, v);

  for (State x = 0; x < n; ++x)
    for (State y = 0; y < n; ++y)
      if (a.label(x) < a.label(y)) rho.set(x, y);

  std::mt19937_64 rng(options.shuffle_seed.value_or(0));
  while (!stack.empty()) {
    if (options.shuffle_seed && stack.size() > 1)
      std::swap(stack[rng() % stack.size()], stack.back());
    auto [x, y] = stack.back();
    stack.pop_back();
    // Only equally labelled targets have equally labelled incoming edges.
    if (a.label(x) != a.label(y)) continue;
    for (State xp : a.predecessors(x)) {
      for (State yp : a.predecessors(y)) {
        if (xp == yp) continue;
        if (rho.test(yp, xp)) return std::nullopt;
        if (!rho.test(xp, yp)) {
          rho.set(xp, yp);
          stack.emplace_back(xp, yp);
        }
      }
    }
  }
  if (!is_acyclic(rho)) return std::nullopt;
  return rho;
}

}  // namespace

std::optional<Relation> closure_with_pair(const Nfa& a, State u, State v,
                                          const ClosureOptions& options) {
  if (u == v) throw std::invalid_argument("closure_with_pair needs two distinct states");
  if (u >= a.num_states() || v >= a.num_states())
    throw std::invalid_argument("state out of range");
  require_valid(a);
  return closure_unchecked(a, u, v, options);
}

Relation rho_exists(const Nfa& a, const RhoOptions& options) {
  require_valid(a);
  const std::size_t n = a.num_states();
  Relation rho(n);

  if (options.threads <= 1 || options.seed_from_closures) {
    for (State u = 0; u < n; ++u) {
      for (State v = 0; v < n; ++v) {
        if (u == v || rho.test(u, v)) continue;
        auto closure = closure_unchecked(a, u, v, {});
        if (!closure) continue;
        rho.set(u, v);
        if (options.seed_from_closures) {
          Relation full = transitive_reflexive_closure(*closure);
          for (auto [x, y] : full.pairs()) rho.set(x, y);
        }
      }
    }
    return rho;
  }

  // Each worker owns whole rows, so writes never share a word.
  std::atomic<State> next_row{0};
  auto worker = [&] {
    for (State u = next_row++; u < n; u = next_row++)
      for (State v = 0; v < n; ++v)
        if (u != v && closure_unchecked(a, u, v, {})) rho.set(u, v);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < options.threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return rho;
}

std::vector<std::uint32_t> scc(const Relation& rel) {
  const std::size_t n = rel.size();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::vector<State>> succ(n);
  for (State u = 0; u < n; ++u) succ[u] = rel.successors(u);

  // Iterative Tarjan.
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<State> stack;
  std::vector<std::pair<State, std::size_t>> call;
  std::uint32_t counter = 0, components = 0;
  for (State root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [u, next] = call.back();
      if (next == 0 && index[u] == kUnset) {
        index[u] = low[u] = counter++;
        stack.push_back(u);
        on_stack[u] = 1;
      }
      if (next < succ[u].size()) {
        State w = succ[u][next++];
        if (index[w] == kUnset) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[u] = std::min(low[u], index[w]);
        }
        continue;
      }
      if (low[u] == index[u]) {
        State w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
        } while (w != u);
        ++components;
      }
      State done = u;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }

  // Renumber by smallest member.
  std::vector<std::uint32_t> relabel(components, kUnset);
  std::uint32_t next_id = 0;
  for (State u = 0; u < n; ++u)
    if (relabel[comp[u]] == kUnset) relabel[comp[u]] = next_id++;
  for (State u = 0; u < n; ++u) comp[u] = relabel[comp[u]];
  return comp;
}

PartialOrder order_from_rho(const Relation& rho, std::span<const State> enumeration) {
  const std::size_t n = rho.size();
  std::vector<std::size_t> rank(n);
  if (enumeration.empty()) {
    for (State q = 0; q < n; ++q) rank[q] = q;
  } else {
    if (enumeration.size() != n) throw std::invalid_argument("enumeration size mismatch");
    std::vector<std::uint8_t> seen(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      State q = enumeration[i];
      if (q >= n || seen[q]) throw std::invalid_argument("enumeration is not a permutation");
      seen[q] = 1;
      rank[q] = i;
    }
  }
  auto comp = scc(rho);
  Relation r(n);
  for (State u = 0; u < n; ++u) {
    for (State v = 0; v < n; ++v) {
      if (u == v) continue;
      bool in = comp[u] == comp[v] ? rank[u] < rank[v] : rho.test(u, v);
      if (in) r.set(u, v);
    }
  }
  auto ord = PartialOrder::certify(transitive_reflexive_closure(r));
  if (!ord) throw std::logic_error("closure of the component order is not antisymmetric");
  return std::move(*ord);
}

PartialOrder build_triangle(const Nfa& a, std::span<const State> enumeration,
                            const RhoOptions& options) {
  return order_from_rho(rho_exists(a, options), enumeration);
}

}  // namespace colexidx
