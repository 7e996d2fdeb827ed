#include "colexidx/automaton.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <deque>
#include <map>
#include <sstream>

namespace colexidx {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

// ---------------------------------------------------------------------------
// Nfa

Nfa::Nfa(std::size_t num_states, State initial, std::vector<State> finals,
         std::vector<Edge> edges, std::vector<char> alphabet)
    : num_states_(num_states), initial_(initial) {
  if (num_states == 0) throw std::invalid_argument("automaton has no states");
  if (num_states >= kMixedLabel) throw std::invalid_argument("too many states");
  if (initial >= num_states) throw std::invalid_argument("initial state out of range");
  {
    auto sorted = alphabet;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("alphabet lists a symbol twice");
  }
  for (const Edge& e : edges) {
    if (e.source >= num_states || e.target >= num_states)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.label == kSentinel || e.label > alphabet.size())
      throw std::invalid_argument("edge label out of range");
  }
  for (State f : finals)
    if (f >= num_states) throw std::invalid_argument("final state out of range");

  // Drop symbols that label no edge, keeping the relative order of the rest.
  std::vector<Symbol> remap(alphabet.size() + 1, 0);
  for (const Edge& e : edges) remap[e.label] = 1;
  Symbol next = 0;
  for (std::size_t c = 1; c < remap.size(); ++c) {
    if (remap[c] != 0) {
      remap[c] = ++next;
      alphabet_.push_back(alphabet[c - 1]);
    }
  }
  for (Edge& e : edges) e.label = remap[e.label];

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  std::sort(finals.begin(), finals.end());
  finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
  finals_ = std::move(finals);
  final_mark_.assign(num_states, 0);
  for (State f : finals_) final_mark_[f] = 1;

  out_begin_.assign(num_states + 1, 0);
  for (const Edge& e : edges_) ++out_begin_[e.source + 1];
  for (std::size_t q = 0; q < num_states; ++q) out_begin_[q + 1] += out_begin_[q];

  labels_.assign(num_states, kSentinel);
  std::vector<std::vector<State>> preds(num_states);
  for (const Edge& e : edges_) {
    Symbol& lab = labels_[e.target];
    if (lab == kSentinel) {
      lab = e.label;
    } else if (lab != e.label) {
      lab = kMixedLabel;
    }
    preds[e.target].push_back(e.source);
  }
  pred_begin_.assign(num_states + 1, 0);
  for (std::size_t q = 0; q < num_states; ++q) {
    auto& p = preds[q];
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    pred_begin_[q + 1] = pred_begin_[q] + static_cast<std::uint32_t>(p.size());
    preds_.insert(preds_.end(), p.begin(), p.end());
  }
}

char Nfa::symbol_char(Symbol c) const {
  if (c == kSentinel) return '#';
  if (c > alphabet_.size()) throw std::out_of_range("symbol code out of range");
  return alphabet_[c - 1];
}

Symbol Nfa::encode(char ch) const noexcept {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), ch);
  if (it == alphabet_.end()) return kUnknownSymbol;
  return static_cast<Symbol>(it - alphabet_.begin()) + 1;
}

Word Nfa::encode(std::string_view text) const {
  Word word;
  word.reserve(text.size());
  for (char ch : text) word.push_back(encode(ch));
  return word;
}

std::string Nfa::decode(std::span<const Symbol> word) const {
  std::string out;
  out.reserve(word.size());
  for (Symbol c : word) out.push_back(c == kUnknownSymbol ? '?' : symbol_char(c));
  return out;
}

std::span<const Edge> Nfa::out_edges(State q) const {
  return std::span<const Edge>(edges_).subspan(out_begin_[q],
                                               out_begin_[q + 1] - out_begin_[q]);
}

std::span<const State> Nfa::predecessors(State q) const {
  return std::span<const State>(preds_).subspan(pred_begin_[q],
                                                pred_begin_[q + 1] - pred_begin_[q]);
}

bool Nfa::is_deterministic() const {
  for (State q = 0; q < num_states_; ++q) {
    std::vector<Symbol> seen;
    for (const Edge& e : out_edges(q)) seen.push_back(e.label);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  }
  return true;
}

bool operator==(const Nfa& lhs, const Nfa& rhs) {
  return lhs.num_states_ == rhs.num_states_ && lhs.initial_ == rhs.initial_ &&
         lhs.finals_ == rhs.finals_ && lhs.edges_ == rhs.edges_ &&
         lhs.alphabet_ == rhs.alphabet_;
}

// ---------------------------------------------------------------------------
// NfaBuilder / Dfa

NfaBuilder::NfaBuilder(std::size_t num_states, State initial)
    : num_states_(num_states), initial_(initial) {}

NfaBuilder& NfaBuilder::declare_alphabet(std::vector<char> order) {
  declared_ = std::move(order);
  return *this;
}

NfaBuilder& NfaBuilder::add_final(State q) {
  finals_.push_back(q);
  return *this;
}

NfaBuilder& NfaBuilder::add_edge(State source, State target, char label) {
  edges_.push_back({source, target, label});
  return *this;
}

Nfa NfaBuilder::build() const {
  std::vector<char> alphabet;
  if (declared_) {
    alphabet = *declared_;
  } else {
    for (const auto& e : edges_) alphabet.push_back(e.label);
    std::sort(alphabet.begin(), alphabet.end(), [](char a, char b) {
      return static_cast<unsigned char>(a) < static_cast<unsigned char>(b);
    });
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  }
  std::array<Symbol, 256> code{};
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    code[static_cast<unsigned char>(alphabet[i])] = static_cast<Symbol>(i + 1);
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& e : edges_) {
    Symbol c = code[static_cast<unsigned char>(e.label)];
    if (c == 0)
      throw std::invalid_argument(std::string("label '") + e.label +
                                  "' is not in the declared alphabet");
    edges.push_back({e.source, e.target, c});
  }
  return Nfa(num_states_, initial_, finals_, std::move(edges), std::move(alphabet));
}

Dfa::Dfa(Nfa nfa) : nfa_(std::move(nfa)) {
  if (!nfa_.is_deterministic())
    throw std::invalid_argument("automaton is not deterministic");
}

bool ValidationReport::violates(int assumption) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.assumption == assumption; });
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::uint64_t parse_uint(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected a non-negative integer, got '" +
                               std::string(token) + "'");
  return value;
}

}  // namespace

Nfa parse_nfa(std::string_view text, const ParseOptions& options) {
  std::optional<std::uint64_t> states;
  std::optional<std::pair<std::uint64_t, std::size_t>> initial;
  std::optional<std::vector<char>> alphabet;
  std::vector<std::pair<std::uint64_t, std::size_t>> finals;
  struct RawEdge {
    std::uint64_t source, target;
    char label;
    std::size_t line;
  };
  std::vector<RawEdge> edges;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    std::string_view keyword = tokens[0];
    if (keyword == "alphabet") {
      if (alphabet) throw ParseError(line_no, "alphabet declared twice");
      std::vector<char> symbols;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (tokens[i].size() != 1)
          throw ParseError(line_no, "alphabet symbols must be single characters");
        if (std::find(symbols.begin(), symbols.end(), tokens[i][0]) != symbols.end())
          throw ParseError(line_no, std::string("symbol '") + tokens[i][0] +
                                        "' listed twice");
        symbols.push_back(tokens[i][0]);
      }
      alphabet = std::move(symbols);
    } else if (keyword == "states") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: states <count>");
      if (states) throw ParseError(line_no, "state count declared twice");
      states = parse_uint(tokens[1], line_no);
      if (*states == 0) throw ParseError(line_no, "an automaton needs at least one state");
      if (*states >= kMixedLabel) throw ParseError(line_no, "too many states");
    } else if (keyword == "initial") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: initial <state>");
      if (initial) throw ParseError(line_no, "initial state declared twice");
      initial = {parse_uint(tokens[1], line_no), line_no};
    } else if (keyword == "final") {
      for (std::size_t i = 1; i < tokens.size(); ++i)
        finals.emplace_back(parse_uint(tokens[i], line_no), line_no);
    } else if (keyword == "edge") {
      if (tokens.size() != 4)
        throw ParseError(line_no, "usage: edge <source> <target> <label>");
      if (tokens[3].size() != 1)
        throw ParseError(line_no, "edge labels must be single characters");
      edges.push_back({parse_uint(tokens[1], line_no), parse_uint(tokens[2], line_no),
                       tokens[3][0], line_no});
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(keyword) + "'");
    }
  }

  if (!states) throw ParseError(line_no, "missing 'states' line");
  if (!initial) throw ParseError(line_no, "missing 'initial' line");
  auto check_state = [&](std::uint64_t q, std::size_t line) {
    if (q >= *states)
      throw ParseError(line, "state " + std::to_string(q) + " out of range (states " +
                                 std::to_string(*states) + ")");
  };
  check_state(initial->first, initial->second);
  NfaBuilder builder(*states, static_cast<State>(initial->first));
  if (alphabet) builder.declare_alphabet(*alphabet);
  for (auto [q, line] : finals) {
    check_state(q, line);
    builder.add_final(static_cast<State>(q));
  }
  for (const RawEdge& e : edges) {
    check_state(e.source, e.line);
    check_state(e.target, e.line);
    if (e.target == initial->first && !options.allow_initial_incoming)
      throw ParseError(e.line, "edge into the initial state " +
                                   std::to_string(initial->first));
    if (alphabet && std::find(alphabet->begin(), alphabet->end(), e.label) == alphabet->end())
      throw ParseError(e.line, std::string("label '") + e.label +
                                   "' is not in the declared alphabet");
    builder.add_edge(static_cast<State>(e.source), static_cast<State>(e.target), e.label);
  }
  return builder.build();
}

std::string format_nfa(const Nfa& a) {
  std::ostringstream out;
  if (a.sigma() > 0) {
    out << "alphabet";
    for (char c : a.alphabet()) out << ' ' << c;
    out << '\n';
  }
  out << "states " << a.num_states() << '\n';
  out << "initial " << a.initial() << '\n';
  out << "final";
  for (State f : a.finals()) out << ' ' << f;
  out << '\n';
  for (const Edge& e : a.edges())
    out << "edge " << e.source << ' ' << e.target << ' ' << a.symbol_char(e.label) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation and transformations

namespace {

std::vector<std::uint8_t> forward_reach(const Nfa& a) {
  std::vector<std::uint8_t> seen(a.num_states(), 0);
  std::vector<State> stack{a.initial()};
  seen[a.initial()] = 1;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (const Edge& e : a.out_edges(q)) {
      if (!seen[e.target]) {
        seen[e.target] = 1;
        stack.push_back(e.target);
      }
    }
  }
  return seen;
}

std::vector<std::uint8_t> backward_reach(const Nfa& a) {
  std::vector<std::uint8_t> seen(a.num_states(), 0);
  std::vector<State> stack;
  for (State f : a.finals()) {
    seen[f] = 1;
    stack.push_back(f);
  }
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (State p : a.predecessors(q)) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate(const Nfa& a) {
  ValidationReport report;
  auto reach = forward_reach(a);
  auto coreach = backward_reach(a);
  for (State q = 0; q < a.num_states(); ++q) {
    if (!reach[q])
      report.violations.push_back(
          {1, q, std::nullopt,
           "state " + std::to_string(q) + " is not reachable from the initial state"});
  }
  for (State q = 0; q < a.num_states(); ++q) {
    if (!coreach[q])
      report.violations.push_back(
          {2, q, std::nullopt, "state " + std::to_string(q) + " cannot reach a final state"});
  }
  for (const Edge& e : a.edges()) {
    if (e.target == a.initial())
      report.violations.push_back(
          {3, e.target, e,
           "edge " + std::to_string(e.source) + " -> " + std::to_string(e.target) +
               " enters the initial state"});
  }
  for (State q = 0; q < a.num_states(); ++q) {
    if (a.label(q) != kMixedLabel) continue;
    // Witness: the first incoming edge whose label differs from the smallest.
    Symbol first = kUnknownSymbol;
    for (State p : a.predecessors(q))
      for (const Edge& e : a.out_edges(p))
        if (e.target == q) first = std::min(first, e.label);
    std::optional<Edge> witness;
    for (State p : a.predecessors(q))
      for (const Edge& e : a.out_edges(p))
        if (e.target == q && e.label != first && !witness) witness = e;
    report.violations.push_back(
        {4, q, witness, "state " + std::to_string(q) + " has incoming edges with different labels"});
  }
  return report;
}

void require_valid(const Nfa& a) {
  auto report = validate(a);
  if (!report.ok())
    throw std::invalid_argument("invalid automaton (assumption " +
                                std::to_string(report.violations.front().assumption) +
                                "): " + report.violations.front().message);
}

SplitResult split_by_incoming_label(const Nfa& a) {
  for (const Edge& e : a.edges())
    if (e.target == a.initial())
      throw std::invalid_argument("cannot split an automaton with edges into its initial state");

  const std::size_t n = a.num_states();
  std::vector<std::vector<Symbol>> incoming(n);
  for (const Edge& e : a.edges()) incoming[e.target].push_back(e.label);

  std::vector<std::pair<State, Symbol>> origin;
  std::vector<std::vector<std::pair<Symbol, State>>> copies(n);
  for (State q = 0; q < n; ++q) {
    auto& labels = incoming[q];
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.empty()) labels.push_back(kSentinel);
    for (Symbol c : labels) {
      copies[q].emplace_back(c, static_cast<State>(origin.size()));
      origin.emplace_back(q, c);
    }
  }
  auto copy_for = [&](State q, Symbol c) {
    for (auto [label, id] : copies[q])
      if (label == c) return id;
    throw std::logic_error("missing split copy");
  };

  std::vector<Edge> edges;
  for (const Edge& e : a.edges()) {
    State target = copy_for(e.target, e.label);
    for (auto [label, source] : copies[e.source]) edges.push_back({source, target, e.label});
  }
  std::vector<State> finals;
  for (State f : a.finals())
    for (auto [label, id] : copies[f]) finals.push_back(id);

  Nfa out(origin.size(), copies[a.initial()].front().second, std::move(finals),
          std::move(edges), a.alphabet());
  return {std::move(out), std::move(origin)};
}

Nfa make_input_consistent(const Nfa& a) { return split_by_incoming_label(a).nfa; }

std::optional<Nfa> trim(const Nfa& a) {
  auto reach = forward_reach(a);
  auto coreach = backward_reach(a);
  if (!coreach[a.initial()]) return std::nullopt;
  std::vector<State> renumber(a.num_states(), kUnknownSymbol);
  State next = 0;
  for (State q = 0; q < a.num_states(); ++q)
    if (reach[q] && coreach[q]) renumber[q] = next++;
  std::vector<Edge> edges;
  for (const Edge& e : a.edges())
    if (renumber[e.source] != kUnknownSymbol && renumber[e.target] != kUnknownSymbol)
      edges.push_back({renumber[e.source], renumber[e.target], e.label});
  std::vector<State> finals;
  for (State f : a.finals())
    if (renumber[f] != kUnknownSymbol) finals.push_back(renumber[f]);
  return Nfa(next, renumber[a.initial()], std::move(finals), std::move(edges), a.alphabet());
}

PowersetResult powerset(const Nfa& a, std::size_t max_states) {
  require_valid(a);
  std::map<StateSet, State> ids;
  std::vector<StateSet> subsets;
  std::vector<Edge> edges;
  std::deque<State> queue;

  auto intern = [&](StateSet s) {
    auto [it, inserted] = ids.emplace(std::move(s), static_cast<State>(subsets.size()));
    if (inserted) {
      if (subsets.size() >= max_states)
        throw std::length_error("powerset exceeds " + std::to_string(max_states) + " states");
      subsets.push_back(it->first);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(StateSet{a.initial()});

  std::vector<std::pair<Symbol, State>> moves;
  while (!queue.empty()) {
    State id = queue.front();
    queue.pop_front();
    moves.clear();
    for (State q : subsets[id])
      for (const Edge& e : a.out_edges(q)) moves.emplace_back(e.label, e.target);
    std::sort(moves.begin(), moves.end());
    moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
    for (std::size_t i = 0; i < moves.size();) {
      Symbol c = moves[i].first;
      StateSet target;
      for (; i < moves.size() && moves[i].first == c; ++i) target.push_back(moves[i].second);
      State to = intern(std::move(target));
      edges.push_back({id, to, c});
    }
  }

  std::vector<State> finals;
  for (State id = 0; id < subsets.size(); ++id)
    if (std::any_of(subsets[id].begin(), subsets[id].end(),
                    [&](State q) { return a.is_final(q); }))
      finals.push_back(id);
  Nfa out(subsets.size(), 0, std::move(finals), std::move(edges), a.alphabet());
  return {Dfa(std::move(out)), std::move(subsets)};
}

StateSet run(const Nfa& a, std::span<const State> from, std::span<const Symbol> word) {
  std::vector<std::uint8_t> current(a.num_states(), 0), next(a.num_states(), 0);
  for (State q : from) current.at(q) = 1;
  for (Symbol c : word) {
    std::fill(next.begin(), next.end(), 0);
    if (c != kSentinel && c <= a.sigma()) {
      for (State q = 0; q < a.num_states(); ++q) {
        if (!current[q]) continue;
        for (const Edge& e : a.out_edges(q))
          if (e.label == c) next[e.target] = 1;
      }
    }
    current.swap(next);
  }
  StateSet out;
  for (State q = 0; q < a.num_states(); ++q)
    if (current[q]) out.push_back(q);
  return out;
}

bool accepts(const Nfa& a, std::span<const Symbol> word) {
  const State start[] = {a.initial()};
  auto reached = run(a, start, word);
  return std::any_of(reached.begin(), reached.end(), [&](State q) { return a.is_final(q); });
}

}  // namespace colexidx
