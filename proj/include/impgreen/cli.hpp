#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace impgreen {

enum ExitCode : int {
    exit_ok = 0,
    exit_malformed = 1,
    exit_domain = 2,
    exit_not_converged = 3,
    exit_selfcheck_failed = 4,
};

/// args excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count for grid evaluation: hardware concurrency, capped by
/// IMPEDANCE_GREEN_THREADS when set to a positive integer.
unsigned grid_threads();

} // namespace impgreen
