#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace valtrace {

/// Exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitUnsatisfied = 1,
  kExitError = 2,
};

/// Runs the command line `args` (without the program name). Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace valtrace
