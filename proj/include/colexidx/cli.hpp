#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace colexidx {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;  // validation failure, budget exceeded
inline constexpr int kExitIo = 2;      // I/O, format or usage error

/// Runs the command-line tool on `args` (without the program name), reading
/// patterns from `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace colexidx
