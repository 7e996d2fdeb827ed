#pragma once

#include <string>

#include "colexidx/automaton.hpp"

namespace colexidx::test {

inline const char* kSampleText = R"(alphabet a b x y z
states 7
initial 0
final 5 6
edge 0 1 a
edge 0 2 b
edge 1 3 x
edge 1 4 x
edge 2 4 x
edge 3 3 x
edge 3 5 y
edge 4 4 x
edge 4 6 z
)";

inline Nfa sample() { return parse_nfa(kSampleText); }

inline std::string data_path(const std::string& name) {
  return std::string(COLEXIDX_TEST_DATA) + "/" + name;
}

}  // namespace colexidx::test
