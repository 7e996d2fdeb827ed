#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace colexidx {

using State = std::uint32_t;
using Symbol = std::uint32_t;
using StateSet = std::vector<State>;  // sorted, duplicate-free
using Word = std::vector<Symbol>;

// Code 0 is reserved for the sentinel '#' labelling the initial state. Real
// alphabet symbols are 1..sigma in declared order.
inline constexpr Symbol kSentinel = 0;
inline constexpr Symbol kUnknownSymbol = std::numeric_limits<Symbol>::max();
// Returned by Nfa::label() for states whose incoming labels disagree.
inline constexpr Symbol kMixedLabel = kUnknownSymbol - 1;

struct Edge {
  State source = 0;
  State target = 0;
  Symbol label = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A labelled transition system with one initial state and a set of finals.
///
/// Construction never fails on the four structural assumptions (reachability,
/// co-reachability, no edge into the initial state, input consistency); those
/// are reported by validate(). Operations that rely on them check up front.
/// Edges are deduplicated and kept sorted by (source, target, label). The
/// alphabet only lists symbols that label at least one edge.
class Nfa {
 public:
  Nfa(std::size_t num_states, State initial, std::vector<State> finals,
      std::vector<Edge> edges, std::vector<char> alphabet);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  State initial() const noexcept { return initial_; }
  const StateSet& finals() const noexcept { return finals_; }
  bool is_final(State q) const { return final_mark_[q] != 0; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Symbols in their total order; code c >= 1 is alphabet()[c - 1].
  const std::vector<char>& alphabet() const noexcept { return alphabet_; }
  std::size_t sigma() const noexcept { return alphabet_.size(); }
  char symbol_char(Symbol c) const;
  /// kUnknownSymbol for characters outside the alphabet.
  Symbol encode(char ch) const noexcept;
  Word encode(std::string_view text) const;
  std::string decode(std::span<const Symbol> word) const;

  /// Incoming label of q: kSentinel for states without incoming edges,
  /// kMixedLabel when incoming edges disagree.
  Symbol label(State q) const { return labels_[q]; }

  /// Edges leaving q, sorted by (target, label).
  std::span<const Edge> out_edges(State q) const;
  /// Sources of edges entering q, sorted and duplicate-free.
  std::span<const State> predecessors(State q) const;

  bool is_deterministic() const;

  friend bool operator==(const Nfa& lhs, const Nfa& rhs);

 private:
  std::size_t num_states_;
  State initial_;
  StateSet finals_;
  std::vector<std::uint8_t> final_mark_;
  std::vector<Edge> edges_;
  std::vector<char> alphabet_;
  std::vector<Symbol> labels_;
  std::vector<std::uint32_t> out_begin_;
  std::vector<std::uint32_t> pred_begin_;
  std::vector<State> preds_;
};

/// Builds an Nfa from character-labelled edges. The alphabet is either the
/// declared order (restricted to symbols actually used) or ascending byte
/// order of the labels seen.
class NfaBuilder {
 public:
  explicit NfaBuilder(std::size_t num_states, State initial = 0);

  NfaBuilder& declare_alphabet(std::vector<char> order);
  NfaBuilder& add_final(State q);
  NfaBuilder& add_edge(State source, State target, char label);

  Nfa build() const;

 private:
  std::size_t num_states_;
  State initial_;
  std::optional<std::vector<char>> declared_;
  std::vector<State> finals_;
  struct CharEdge {
    State source;
    State target;
    char label;
  };
  std::vector<CharEdge> edges_;
};

/// A deterministic Nfa: at most one successor per (state, symbol).
class Dfa {
 public:
  /// Throws std::invalid_argument when `nfa` is not deterministic.
  explicit Dfa(Nfa nfa);

  const Nfa& nfa() const noexcept { return nfa_; }
  operator const Nfa&() const noexcept { return nfa_; }

 private:
  Nfa nfa_;
};

struct Violation {
  int assumption = 0;  // 1 reachable, 2 co-reachable, 3 initial has no
                       // incoming edge, 4 input-consistent
  std::optional<State> state;
  std::optional<Edge> edge;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool violates(int assumption) const;
};

struct ParseOptions {
  // Accept edges into the initial state (reported later by validate()).
  bool allow_initial_incoming = false;
};

Nfa parse_nfa(std::string_view text, const ParseOptions& options = {});
std::string format_nfa(const Nfa& a);

ValidationReport validate(const Nfa& a);
/// Throws std::invalid_argument naming the first violation.
void require_valid(const Nfa& a);

struct SplitResult {
  Nfa nfa;
  // (original state, incoming label it was split on) per output state.
  std::vector<std::pair<State, Symbol>> origin;
};

/// Splits every state into one copy per distinct incoming label. Requires
/// assumptions 1-3; outgoing edges are copied onto every copy.
SplitResult split_by_incoming_label(const Nfa& a);
Nfa make_input_consistent(const Nfa& a);

/// Removes states that are unreachable or cannot reach a final state.
/// Returns nullopt when nothing survives (empty language).
std::optional<Nfa> trim(const Nfa& a);

struct PowersetResult {
  Dfa dfa;
  // Underlying state set of each result state.
  std::vector<StateSet> subsets;
};

/// Subset construction from {initial}. States are numbered in breadth-first
/// discovery order, symbols explored in alphabet order.
PowersetResult powerset(const Nfa& a, std::size_t max_states = 1u << 20);

/// Extended transition function applied to every state of `from`.
StateSet run(const Nfa& a, std::span<const State> from,
             std::span<const Symbol> word);
bool accepts(const Nfa& a, std::span<const Symbol> word);

}  // namespace colexidx
