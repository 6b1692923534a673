#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace meanvalue::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kToleranceFailure = 2,
  kIndeterminate = 3,
};

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meanvalue::cli
