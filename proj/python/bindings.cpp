#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "colexidx/automaton.hpp"
#include "colexidx/colex.hpp"
#include "colexidx/index.hpp"
#include "colexidx/oracle.hpp"
#include "colexidx/order.hpp"

namespace py = pybind11;
using namespace colexidx;

namespace {

std::vector<std::vector<State>> chains_of(const ChainPartition& cp) { return cp.chains(); }

std::vector<std::pair<std::uint32_t, std::uint32_t>> intervals_of(const IntervalTuple& iv) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const Interval& in : iv.intervals) out.emplace_back(in.l, in.r);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Co-lex orders and path indexes for finite automata";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  py::class_<Nfa>(m, "Nfa")
      .def_property_readonly("num_states", &Nfa::num_states)
      .def_property_readonly("num_edges", &Nfa::num_edges)
      .def_property_readonly("initial", &Nfa::initial)
      .def_property_readonly("finals", &Nfa::finals)
      .def_property_readonly("alphabet",
                             [](const Nfa& a) { return std::string(a.alphabet().begin(),
                                                                   a.alphabet().end()); })
      .def_property_readonly("edges",
                             [](const Nfa& a) {
                               std::vector<std::tuple<State, State, char>> out;
                               for (const Edge& e : a.edges())
                                 out.emplace_back(e.source, e.target, a.symbol_char(e.label));
                               return out;
                             })
      .def("is_deterministic", &Nfa::is_deterministic)
      .def("accepts", [](const Nfa& a, const std::string& w) { return accepts(a, a.encode(w)); })
      .def("run",
           [](const Nfa& a, const std::vector<State>& from, const std::string& w) {
             return run(a, from, a.encode(w));
           })
      .def("__str__", &format_nfa);

  m.def("parse_nfa", [](const std::string& text) { return parse_nfa(text); }, py::arg("text"));
  m.def("format_nfa", &format_nfa);
  m.def("validate", [](const Nfa& a) {
    std::vector<std::pair<int, std::string>> out;
    for (const auto& v : validate(a).violations) out.emplace_back(v.assumption, v.message);
    return out;
  });
  m.def("make_input_consistent", &make_input_consistent);
  m.def("trim", &trim);
  m.def("powerset", [](const Nfa& a) {
    PowersetResult p = powerset(a);
    return py::make_tuple(p.dfa.nfa(), p.subsets);
  });

  m.def("rho_exists", [](const Nfa& a) { return rho_exists(a).pairs(); });
  m.def("order_pairs", [](const Nfa& a) { return build_triangle(a).relation().pairs(); },
        "Strict pairs of the polynomial-time co-lex order.");
  m.def("width", [](const Nfa& a) { return order_width(build_triangle(a)); });
  m.def("chains", [](const Nfa& a) { return chains_of(min_chain_partition(build_triangle(a))); });
  m.def("exact_width",
        [](const Nfa& a, std::size_t max_states) {
          return exact_width(a, {.max_states = max_states});
        },
        py::arg("a"), py::arg("max_states") = 5);

  m.def("gen_lp", [](std::size_t p) { return gen_Lp(p).nfa(); });
  m.def("gen_primes", [](const std::vector<std::size_t>& primes) {
    return gen_primes_nfa(primes);
  });
  m.def("gen_cycle", &gen_cycle);
  m.def("gen_random",
        [](std::size_t states, std::size_t labels, double density, std::uint64_t seed,
           bool deterministic) {
          return gen_random_nfa({states, labels, density, seed, deterministic});
        },
        py::arg("states") = 5, py::arg("labels") = 2, py::arg("density") = 1.0,
        py::arg("seed") = 0, py::arg("deterministic") = false);

  py::class_<PathIndex>(m, "PathIndex")
      .def(py::init([](const Nfa& a) {
             return build_index(a, min_chain_partition(build_triangle(a)));
           }),
           py::arg("nfa"))
      .def_property_readonly("num_chains", &PathIndex::num_chains)
      .def_property_readonly("num_states", &PathIndex::num_states)
      .def_property_readonly("num_edges", &PathIndex::num_edges)
      .def("match_anywhere",
           [](const PathIndex& idx, const std::string& p) {
             return intervals_of(match_anywhere(idx, p));
           })
      .def("count",
           [](const PathIndex& idx, const std::string& p, bool anchored) {
             return count(idx, anchored ? match_from_start(idx, p) : match_anywhere(idx, p));
           },
           py::arg("pattern"), py::arg("anchored") = false)
      .def("locate",
           [](const PathIndex& idx, const std::string& p, bool anchored) {
             return locate(idx, anchored ? match_from_start(idx, p) : match_anywhere(idx, p));
           },
           py::arg("pattern"), py::arg("anchored") = false)
      .def("is_member", [](const PathIndex& idx, const std::string& p) {
        return is_member(idx, std::string_view(p));
      })
      .def("serialize",
           [](const PathIndex& idx) {
             auto bytes = serialize(idx);
             return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
           })
      .def_static("deserialize", [](const py::bytes& data) {
        std::string raw = data;
        return deserialize({reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()});
      });
}
