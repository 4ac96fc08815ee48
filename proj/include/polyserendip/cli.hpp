#pragma once

#include <iosfwd>

namespace polyserendip {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitNumericalFailure = 1,
    kExitInputError = 2,
    kExitSolverFailure = 3,
};

/// Runs the `polyserendip` command line; all output goes to the given streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace polyserendip
