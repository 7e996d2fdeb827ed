#include "colexidx/order.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace colexidx {

ChainPartition::ChainPartition(std::vector<std::vector<State>> chains, std::size_t num_states)
    : chains_(std::move(chains)),
      chain_of_(num_states, std::numeric_limits<std::uint32_t>::max()),
      position_of_(num_states, 0) {
  std::size_t seen = 0;
  for (std::uint32_t i = 0; i < chains_.size(); ++i) {
    if (chains_[i].empty()) throw std::invalid_argument("chain partition has an empty chain");
    for (std::uint32_t k = 0; k < chains_[i].size(); ++k) {
      State q = chains_[i][k];
      if (q >= num_states) throw std::invalid_argument("chain lists a state out of range");
      if (chain_of_[q] != std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("state " + std::to_string(q) + " appears in two chains");
      chain_of_[q] = i;
      position_of_[q] = k + 1;
      ++seen;
    }
  }
  if (seen != num_states) throw std::invalid_argument("chains do not cover every state");
}

bool ChainPartition::respects(const PartialOrder& ord) const {
  if (ord.size() != num_states()) return false;
  for (const auto& chain : chains_)
    for (std::size_t k = 1; k < chain.size(); ++k)
      if (!ord.less(chain[k - 1], chain[k])) return false;
  return true;
}

Relation transitive_reflexive_closure(const Relation& rel) {
  Relation out = rel;
  const std::size_t n = rel.size();
  for (State u = 0; u < n; ++u) out.set(u, u);
  for (State k = 0; k < n; ++k)
    for (State i = 0; i < n; ++i)
      if (i != k && out.test(i, k)) out.merge_row(i, k);
  return out;
}

bool is_acyclic(const Relation& rel) {
  const std::size_t n = rel.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<State>> succ(n);
  for (State u = 0; u < n; ++u) {
    succ[u] = rel.successors(u);
    for (State v : succ[u]) ++indegree[v];
  }
  std::vector<State> ready;
  for (State u = 0; u < n; ++u)
    if (indegree[u] == 0) ready.push_back(u);
  std::size_t removed = 0;
  while (!ready.empty()) {
    State u = ready.back();
    ready.pop_back();
    ++removed;
    for (State v : succ[u])
      if (--indegree[v] == 0) ready.push_back(v);
  }
  return removed == n;
}

namespace {

// Hopcroft-Karp on the bipartite graph left u -> right v whenever u < v.
class HopcroftKarp {
 public:
  explicit HopcroftKarp(const PartialOrder& ord)
      : n_(ord.size()), adj_(n_), mate_left_(n_, -1), mate_right_(n_, -1), dist_(n_) {
    for (State u = 0; u < n_; ++u) adj_[u] = ord.relation().successors(u);
  }

  std::size_t solve() {
    std::size_t matched = 0;
    while (bfs()) {
      for (State u = 0; u < n_; ++u)
        if (mate_left_[u] < 0 && dfs(u)) ++matched;
    }
    return matched;
  }

  const std::vector<std::int64_t>& mate_left() const { return mate_left_; }
  const std::vector<std::int64_t>& mate_right() const { return mate_right_; }
  const std::vector<std::vector<State>>& adjacency() const { return adj_; }

 private:
  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

  bool bfs() {
    std::queue<State> queue;
    for (State u = 0; u < n_; ++u) {
      if (mate_left_[u] < 0) {
        dist_[u] = 0;
        queue.push(u);
      } else {
        dist_[u] = kInf;
      }
    }
    bool found = false;
    while (!queue.empty()) {
      State u = queue.front();
      queue.pop();
      for (State v : adj_[u]) {
        std::int64_t w = mate_right_[v];
        if (w < 0) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          queue.push(static_cast<State>(w));
        }
      }
    }
    return found;
  }

  bool dfs(State u) {
    for (State v : adj_[u]) {
      std::int64_t w = mate_right_[v];
      if (w < 0 || (dist_[w] == dist_[u] + 1 && dfs(static_cast<State>(w)))) {
        mate_left_[u] = v;
        mate_right_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<State>> adj_;
  std::vector<std::int64_t> mate_left_;
  std::vector<std::int64_t> mate_right_;
  std::vector<std::size_t> dist_;
};

}  // namespace

std::vector<std::int64_t> comparability_matching(const PartialOrder& ord) {
  HopcroftKarp hk(ord);
  hk.solve();
  return hk.mate_left();
}

std::size_t order_width(const PartialOrder& ord) {
  HopcroftKarp hk(ord);
  return ord.size() - hk.solve();
}

ChainPartition min_chain_partition(const PartialOrder& ord) {
  const std::size_t n = ord.size();
  auto next = comparability_matching(ord);
  std::vector<std::uint8_t> has_pred(n, 0);
  for (State u = 0; u < n; ++u)
    if (next[u] >= 0) has_pred[next[u]] = 1;
  std::vector<std::vector<State>> chains;
  for (State u = 0; u < n; ++u) {
    if (has_pred[u]) continue;
    std::vector<State> chain;
    for (std::int64_t q = u; q >= 0; q = next[q]) chain.push_back(static_cast<State>(q));
    chains.push_back(std::move(chain));
  }
  std::sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) {
    return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
  });
  return ChainPartition(std::move(chains), n);
}

StateSet max_antichain(const PartialOrder& ord) {
  const std::size_t n = ord.size();
  HopcroftKarp hk(ord);
  hk.solve();
  const auto& mate_left = hk.mate_left();
  const auto& mate_right = hk.mate_right();
  const auto& adj = hk.adjacency();

  // Koenig: Z = vertices reachable from free left vertices by alternating paths.
  std::vector<std::uint8_t> left_z(n, 0), right_z(n, 0);
  std::vector<State> stack;
  for (State u = 0; u < n; ++u) {
    if (mate_left[u] < 0) {
      left_z[u] = 1;
      stack.push_back(u);
    }
  }
  while (!stack.empty()) {
    State u = stack.back();
    stack.pop_back();
    for (State v : adj[u]) {
      if (right_z[v] || mate_left[u] == static_cast<std::int64_t>(v)) continue;
      right_z[v] = 1;
      std::int64_t w = mate_right[v];
      if (w >= 0 && !left_z[w]) {
        left_z[w] = 1;
        stack.push_back(static_cast<State>(w));
      }
    }
  }
  StateSet antichain;
  for (State u = 0; u < n; ++u)
    if (left_z[u] && !right_z[u]) antichain.push_back(u);
  return antichain;
}

bool is_convex(const PartialOrder& ord, std::span<const State> set) {
  const std::size_t n = ord.size();
  std::vector<std::uint8_t> member(n, 0);
  for (State q : set) member.at(q) = 1;
  for (State v = 0; v < n; ++v) {
    if (member[v]) continue;
    bool below = false, above = false;
    for (State u : set) {
      below = below || ord.less(u, v);
      above = above || ord.less(v, u);
    }
    if (below && above) return false;
  }
  return true;
}

}  // namespace colexidx
