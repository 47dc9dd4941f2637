#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trimerge {

enum ExitCode : int { kExitClean = 0, kExitConflicts = 1, kExitError = 2 };

/// Runs the command line `args` (without the program name). Messages go to
/// `out` and `err`; files are read and written directly.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace trimerge
