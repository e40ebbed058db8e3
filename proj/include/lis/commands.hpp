#pragma once

#include <iosfwd>

namespace lis {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

/// Runs one CLI invocation (argv[0] is the program name). Output files go
/// to `<out>/<command>.csv` (and `.svg` with --svg); notes are written to
/// `out`, diagnostics to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lis
