#pragma once

#include <iosfwd>

namespace reconf {

/// Exit statuses of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitMalformed = 2, kExitCapExceeded = 3 };

/// Parses argv and runs one subcommand. JSON goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reconf
