#pragma once

#include <ostream>

namespace stieltjes {

/// Full command-line driver, callable in-process so tests can exercise the
/// exact binary behavior.  Returns the process exit code:
///   0  success / identity verified
///   1  malformed input or bad usage (message names the JSON field path)
///   2  numerical failure (an identity or inequality check did not pass)
///   3  failed precondition (message names the offending level)
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stieltjes
