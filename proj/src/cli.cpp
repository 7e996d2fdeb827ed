#include "colexidx/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <thread>

#include "colexidx/automaton.hpp"
#include "colexidx/bench.hpp"
#include "colexidx/colex.hpp"
#include "colexidx/index.hpp"
#include "colexidx/oracle.hpp"
#include "colexidx/order.hpp"

namespace colexidx {

namespace {

using json = nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Domain failure reported with exit code 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path);
}

Nfa load_valid(const std::string& path) {
  Nfa a = parse_nfa(read_file(path), {.allow_initial_incoming = true});
  auto report = validate(a);
  if (!report.ok()) throw DomainError(path + ": " + report.violations.front().message);
  return a;
}

std::string label_name(const Nfa& a, Symbol c) {
  return c == kSentinel ? std::string("#") : std::string(1, a.symbol_char(c));
}

// Writes an automaton to `output` or, without one, to stdout (inside the JSON
// document under --json).
void emit_nfa(const std::string& text, const std::string& output, bool as_json, json& doc,
              std::ostream& out) {
  if (!output.empty()) {
    write_file(output, text);
    doc["output"] = output;
  } else if (as_json) {
    doc["nfa"] = text;
  } else {
    out << text;
  }
}

struct Common {
  bool json = false;
};

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, const Common& c, std::ostream& out) {
  Nfa a = parse_nfa(read_file(path), {.allow_initial_incoming = true});
  auto report = validate(a);
  if (c.json) {
    json doc{{"ok", report.ok()}, {"violations", json::array()}};
    for (const auto& v : report.violations) {
      json item{{"assumption", v.assumption}, {"message", v.message}};
      if (v.state) item["state"] = *v.state;
      if (v.edge)
        item["edge"] = {v.edge->source, v.edge->target, label_name(a, v.edge->label)};
      doc["violations"].push_back(item);
    }
    out << doc.dump(2) << '\n';
  } else if (report.ok()) {
    out << "ok: " << a.num_states() << " states, " << a.num_edges() << " edges\n";
  } else {
    for (const auto& v : report.violations)
      out << "assumption " << v.assumption << ": " << v.message << '\n';
  }
  return report.ok() ? kExitOk : kExitDomain;
}

// States kept by trim(), in their original order.
std::vector<State> trim_survivors(const Nfa& a) {
  const std::size_t n = a.num_states();
  std::vector<std::uint8_t> fwd(n, 0), bwd(n, 0);
  std::vector<State> stack{a.initial()};
  fwd[a.initial()] = 1;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (const Edge& e : a.out_edges(q))
      if (!fwd[e.target]) fwd[e.target] = 1, stack.push_back(e.target);
  }
  for (State q : a.finals()) bwd[q] = 1, stack.push_back(q);
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (State p : a.predecessors(q))
      if (!bwd[p]) bwd[p] = 1, stack.push_back(p);
  }
  std::vector<State> kept;
  for (State q = 0; q < n; ++q)
    if (fwd[q] && bwd[q]) kept.push_back(q);
  return kept;
}

int cmd_normalize(const std::string& path, const std::string& output, bool names,
                  const Common& c, std::ostream& out) {
  Nfa raw = parse_nfa(read_file(path), {.allow_initial_incoming = true});
  if (validate(raw).violates(3)) throw DomainError("initial state has incoming edges");
  auto trimmed = trim(raw);
  if (!trimmed) throw DomainError("empty language: no state survives trimming");
  auto kept = trim_survivors(raw);
  SplitResult split = split_by_incoming_label(*trimmed);

  std::string text;
  if (names) {
    for (State q = 0; q < split.nfa.num_states(); ++q) {
      auto [orig, label] = split.origin[q];
      text += "# " + std::to_string(q) + " = " + std::to_string(kept[orig]) + "@" +
              label_name(*trimmed, label) + "\n";
    }
  }
  text += format_nfa(split.nfa);
  json doc{{"states", split.nfa.num_states()}, {"edges", split.nfa.num_edges()}};
  if (names) {
    doc["names"] = json::array();
    for (auto [orig, label] : split.origin)
      doc["names"].push_back(std::to_string(kept[orig]) + "@" + label_name(*trimmed, label));
  }
  emit_nfa(text, output, c.json, doc, out);
  if (c.json) out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_powerset(const std::string& path, const std::string& output,
                 const std::string& subsets_path, const Common& c, std::ostream& out) {
  Nfa a = load_valid(path);
  PowersetResult p = powerset(a);
  std::string sidecar;
  for (State q = 0; q < p.subsets.size(); ++q) {
    sidecar += std::to_string(q) + ":";
    for (State s : p.subsets[q]) sidecar += " " + std::to_string(s);
    sidecar += '\n';
  }
  if (!subsets_path.empty()) write_file(subsets_path, sidecar);
  const Nfa& d = p.dfa;
  json doc{{"states", d.num_states()}, {"edges", d.num_edges()}, {"subsets", p.subsets}};
  emit_nfa(format_nfa(d), output, c.json, doc, out);
  if (c.json) out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_order(const std::string& path, bool dump_pairs, bool dump_chains, bool exact,
              std::size_t max_states, unsigned threads, const Common& c, std::ostream& out) {
  Nfa a = load_valid(path);
  Relation rho = rho_exists(a, {.threads = threads});
  PartialOrder ord = order_from_rho(rho);
  ChainPartition cp = min_chain_partition(ord);
  const std::size_t width = cp.num_chains();

  json doc{{"states", a.num_states()}, {"width", width}, {"chains", width}};
  std::ostringstream text;
  text << "width " << width << "\nchains " << width << '\n';

  if (exact) {
    std::size_t w = 0;
    try {
      w = exact_width(a, {.max_states = max_states});
    } catch (const BudgetExceeded& e) {
      throw DomainError(e.what());
    }
    doc["exact"] = w;
    doc["match"] = w == width;
    text << "exact " << w << "\nmatch " << (w == width ? "true" : "false") << '\n';
  }
  if (dump_pairs) {
    auto rho_pairs = rho.pairs();
    auto ord_pairs = ord.relation().pairs();
    doc["rho_exists"] = rho_pairs;
    doc["order"] = ord_pairs;
    text << "# rho_exists\n";
    for (auto [u, v] : rho_pairs) text << u << ' ' << v << '\n';
    text << "# order\n";
    for (auto [u, v] : ord_pairs) text << u << ' ' << v << '\n';
  }
  if (dump_chains) {
    doc["assignment"] = json::array();
    text << "# chains\n";
    for (State q = 0; q < a.num_states(); ++q) {
      doc["assignment"].push_back({q, cp.chain_of(q) + 1, cp.position_of(q)});
      text << q << ' ' << cp.chain_of(q) + 1 << ' ' << cp.position_of(q) << '\n';
    }
  }
  out << (c.json ? doc.dump(2) + "\n" : text.str());
  return kExitOk;
}

json dump_index(const PathIndex& idx) {
  json doc{{"t", idx.num_chains()},
           {"states", idx.num_states()},
           {"edges", idx.num_edges()},
           {"alphabet", std::string(idx.alphabet().begin(), idx.alphabet().end())},
           {"initial", {{"chain", idx.initial_chain() + 1}, {"position", idx.initial_position()}}},
           {"space_words", idx.space_words()},
           {"chains", json::array()}};
  for (std::size_t i = 0; i < idx.num_chains(); ++i) {
    json chain = json::array();
    for (std::uint32_t k = 1; k <= idx.chain_size(i); ++k) {
      json entry{{"state", idx.state_at(i, k)}, {"final", idx.final_at(i, k)},
                 {"out", json::array()}};
      for (const OutEntry& e : idx.out_entries(i, k))
        entry["out"].push_back({std::string(1, idx.alphabet()[e.label - 1]), e.chain + 1,
                                e.position});
      chain.push_back(entry);
    }
    doc["chains"].push_back(chain);
  }
  return doc;
}

int cmd_build(const std::string& path, const std::string& output, bool dump_json,
              unsigned threads, const Common& c, std::ostream& out) {
  Nfa a = load_valid(path);
  PartialOrder ord = build_triangle(a, {}, {.threads = threads});
  ChainPartition cp = min_chain_partition(ord);
  PathIndex idx = build_index(a, cp);
  auto bytes = serialize(idx);
  if (!output.empty())
    write_file(output, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
  if (dump_json) {
    out << dump_index(idx).dump(2) << '\n';
    return kExitOk;
  }
  if (c.json) {
    json doc{{"t", idx.num_chains()}, {"states", idx.num_states()},
             {"edges", idx.num_edges()}, {"bytes", bytes.size()}};
    if (!output.empty()) doc["output"] = output;
    out << doc.dump(2) << '\n';
  } else {
    out << "t " << idx.num_chains() << "\nstates " << idx.num_states() << "\nedges "
        << idx.num_edges() << "\nbytes " << bytes.size() << '\n';
  }
  return kExitOk;
}

struct QueryResult {
  std::size_t count = 0;
  StateSet located;
  bool member = false;
  std::optional<char> unknown;
};

int cmd_query(const std::string& index_path, const std::vector<std::string>& patterns_arg,
              const std::string& mode, bool want_count, bool want_locate, bool want_member,
              bool dump_json, unsigned threads, const Common& c, std::istream& in,
              std::ostream& out, std::ostream& err) {
  std::string raw = read_file(index_path);
  PathIndex idx = deserialize(
      {reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()});
  if (dump_json) {
    out << dump_index(idx).dump(2) << '\n';
    return kExitOk;
  }
  if (!want_count && !want_locate && !want_member) want_count = true;

  std::vector<std::string> patterns = patterns_arg;
  if (patterns.empty()) {
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      patterns.push_back(std::move(line));
    }
  }

  const bool anywhere = mode == "anywhere";
  std::vector<QueryResult> results(patterns.size());
  auto answer = [&](std::size_t k) {
    const std::string& p = patterns[k];
    QueryResult& r = results[k];
    Word w = idx.encode(p);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] == kUnknownSymbol) {
        r.unknown = p[i];
        return;
      }
    if (want_count || want_locate) {
      IntervalTuple iv = anywhere ? match_anywhere(idx, w) : match_from_start(idx, w);
      r.count = count(idx, iv);
      if (want_locate) r.located = locate(idx, iv);
    }
    if (want_member) r.member = is_member(idx, w);
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(patterns.size())));
  if (threads <= 1) {
    for (std::size_t k = 0; k < patterns.size(); ++k) answer(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t k = t; k < patterns.size(); k += threads) answer(k);
      });
  }

  json doc = json::array();
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const QueryResult& r = results[k];
    if (r.unknown)
      err << "line " << k + 1 << ": unknown symbol '" << *r.unknown << "'\n";
    if (c.json) {
      json item{{"pattern", patterns[k]}};
      if (want_count) item["count"] = r.count;
      if (want_locate) item["locate"] = r.located;
      if (want_member) item["member"] = r.member;
      if (r.unknown) item["unknown_symbol"] = std::string(1, *r.unknown);
      doc.push_back(item);
      continue;
    }
    std::vector<std::string> cols;
    if (want_count) cols.push_back(std::to_string(r.count));
    if (want_locate) {
      std::string ids;
      for (State q : r.located) ids += (ids.empty() ? "" : ",") + std::to_string(q);
      cols.push_back(ids);
    }
    if (want_member) cols.push_back(r.member ? "true" : "false");
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
    out << '\n';
  }
  if (c.json) out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_bench(const std::vector<std::size_t>& states, const std::vector<std::size_t>& ts,
              std::size_t patterns, std::size_t length, std::uint64_t seed, double min_seconds,
              const Common& c, std::ostream& out) {
  json doc = json::array();
  if (!c.json) out << bench_csv_header() << '\n';
  if (patterns == 0) {
    if (c.json) out << doc.dump(2) << '\n';
    return kExitOk;
  }
  for (std::size_t n : states) {
    for (std::size_t t : ts) {
      BenchRow row = bench_trie(n, t, patterns, length, seed, min_seconds);
      if (c.json) {
        doc.push_back({{"seed", row.seed}, {"states", row.states}, {"edges", row.edges},
                       {"t", row.t}, {"pattern_len", row.pattern_len},
                       {"ns_per_char", row.ns_per_char}});
      } else {
        out << bench_csv_row(row) << '\n';
      }
    }
  }
  if (c.json) out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Co-lex orders and path indexes for finite automata", "colexidx"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "colexidx 0.1.0");
  Common common;
  app.add_flag("--json", common.json, "JSON output");

  std::string input, output, subsets_path, index_path, mode = "anywhere";
  bool names = false, dump_pairs = false, dump_chains = false, exact = false;
  bool want_count = false, want_locate = false, want_member = false, dump_json = false;
  std::size_t max_states = 8;
  unsigned threads = 1;
  std::vector<std::string> patterns;

  auto* validate_cmd = app.add_subcommand("validate", "Check the structural assumptions");
  validate_cmd->add_option("input", input, "NFA file")->required();

  auto* normalize_cmd = app.add_subcommand("normalize", "Trim and split by incoming label");
  normalize_cmd->add_option("input", input, "NFA file")->required();
  normalize_cmd->add_option("-o,--output", output, "Output file (default stdout)");
  normalize_cmd->add_flag("--names", names, "Annotate states as original@label");

  auto* powerset_cmd = app.add_subcommand("powerset", "Subset construction");
  powerset_cmd->add_option("input", input, "NFA file")->required();
  powerset_cmd->add_option("-o,--output", output, "Output file (default stdout)");
  powerset_cmd->add_option("--subsets", subsets_path, "Write the state-to-subset mapping here");

  auto* order_cmd = app.add_subcommand("order", "Compute the order, its width and chains");
  order_cmd->add_option("input", input, "NFA file")->required();
  order_cmd->add_flag("--dump-pairs", dump_pairs, "Print rho_exists and order pairs");
  order_cmd->add_flag("--dump-chains", dump_chains, "Print state chain position lines");
  order_cmd->add_flag("--exact", exact, "Also compute the exact width by enumeration");
  order_cmd->add_option("--max-states", max_states, "Enumeration budget for --exact")
      ->check(CLI::Range(1, 32));
  order_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));

  auto* build_cmd = app.add_subcommand("build", "Build and serialize a path index");
  build_cmd->add_option("input", input, "NFA file")->required();
  build_cmd->add_option("-o,--output", output, "Index file");
  build_cmd->add_flag("--dump-json", dump_json, "Print a structural dump of the index");
  build_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));

  auto* query_cmd = app.add_subcommand("query", "Query an index");
  query_cmd->add_option("index", index_path, "Index file")->required();
  query_cmd->add_option("patterns", patterns, "Patterns (default: one per stdin line)");
  query_cmd->add_option("--mode", mode, "anywhere or member")
      ->check(CLI::IsMember({"anywhere", "member"}));
  query_cmd->add_flag("--count", want_count, "Print the number of states reached");
  query_cmd->add_flag("--locate", want_locate, "Print the states reached");
  query_cmd->add_flag("--member", want_member, "Print whether the pattern is accepted");
  query_cmd->add_flag("--dump-json", dump_json, "Print a structural dump of the index");
  query_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));

  std::string sizes = "100,1000,10000", chain_counts = "2";
  std::size_t bench_patterns = 1000, length = 16;
  std::uint64_t seed = 1;
  double min_seconds = 0.05;
  auto* bench_cmd = app.add_subcommand("bench", "Time queries on generated tries (CSV)");
  bench_cmd->add_option("--states", sizes, "Comma-separated state counts");
  bench_cmd->add_option("--t", chain_counts, "Comma-separated chain counts");
  bench_cmd->add_option("--patterns", bench_patterns, "Patterns per configuration");
  bench_cmd->add_option("--length", length, "Pattern length")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", seed, "Random seed");
  bench_cmd->add_option("--min-seconds", min_seconds, "Minimum timed work per row");

  auto* gen_cmd = app.add_subcommand("gen", "Generate automata");
  gen_cmd->require_subcommand(1);
  gen_cmd->add_option("-o,--output", output, "Output file (default stdout)");
  std::size_t p = 0, m = 0;
  std::vector<std::size_t> primes;
  RandomNfaParams random_params;
  auto* gen_lp = gen_cmd->add_subcommand("lp", "Multiples of p over a unary alphabet");
  gen_lp->add_option("p", p, "Period")->required()->check(CLI::PositiveNumber);
  auto* gen_primes = gen_cmd->add_subcommand("primes", "Union of prime-length cycles");
  gen_primes->add_option("primes", primes, "Distinct primes")->required();
  auto* gen_cycle_cmd = gen_cmd->add_subcommand("cycle", "Simple a-cycle behind a start state");
  gen_cycle_cmd->add_option("m", m, "Cycle length")->required()->check(CLI::PositiveNumber);
  auto* gen_random = gen_cmd->add_subcommand("random", "Seeded random automaton");
  gen_random->add_option("--states", random_params.states, "State count")
      ->check(CLI::PositiveNumber);
  gen_random->add_option("--labels", random_params.labels, "Alphabet size")
      ->check(CLI::Range(1, 26));
  gen_random->add_option("--density", random_params.density, "Extra edges per state")
      ->check(CLI::NonNegativeNumber);
  gen_random->add_option("--seed", random_params.seed, "Random seed");
  gen_random->add_flag("--deterministic", random_params.deterministic, "Emit a DFA");

  for (auto* sub : {validate_cmd, normalize_cmd, powerset_cmd, order_cmd, build_cmd, query_cmd,
                    bench_cmd, gen_cmd})
    sub->add_flag("--json", common.json, "JSON output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitIo;
  }

  auto parse_list = [](const std::string& text) {
    std::vector<std::size_t> values;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
      std::size_t used = 0;
      unsigned long long v = std::stoull(item, &used);
      if (used != item.size() || v == 0) throw IoError("bad list element '" + item + "'");
      values.push_back(static_cast<std::size_t>(v));
    }
    return values;
  };

  try {
    if (*validate_cmd) return cmd_validate(input, common, out);
    if (*normalize_cmd) return cmd_normalize(input, output, names, common, out);
    if (*powerset_cmd) return cmd_powerset(input, output, subsets_path, common, out);
    if (*order_cmd)
      return cmd_order(input, dump_pairs, dump_chains, exact, max_states, threads, common, out);
    if (*build_cmd) return cmd_build(input, output, dump_json, threads, common, out);
    if (*query_cmd)
      return cmd_query(index_path, patterns, mode, want_count, want_locate, want_member,
                       dump_json, threads, common, in, out, err);
    if (*bench_cmd) {
      std::vector<std::size_t> state_list, t_list;
      try {
        state_list = parse_list(sizes);
        t_list = parse_list(chain_counts);
      } catch (const std::logic_error&) {
        throw IoError("--states and --t take comma-separated positive integers");
      }
      return cmd_bench(state_list, t_list, bench_patterns, length, seed, min_seconds, common,
                       out);
    }
    if (*gen_cmd) {
      Nfa a = *gen_lp          ? gen_Lp(p).nfa()
              : *gen_primes    ? gen_primes_nfa(primes)
              : *gen_cycle_cmd ? gen_cycle(m)
                               : gen_random_nfa(random_params);
      json doc{{"states", a.num_states()}, {"edges", a.num_edges()}};
      emit_nfa(format_nfa(a), output, common.json, doc, out);
      if (common.json) out << doc.dump(2) << '\n';
      return kExitOk;
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitIo;
}

}  // namespace colexidx
