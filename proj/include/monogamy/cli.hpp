#pragma once

#include <ostream>

namespace monogamy::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  /// FAILED or NONE verdict, box violating no-disturbance, failed claim.
  exit_verdict = 1,
  /// Bad arguments, malformed JSON, inconsistent input.
  exit_input = 2,
  exit_budget = 3,
  exit_internal = 4,
};

/// Runs one command; JSON results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monogamy::cli
