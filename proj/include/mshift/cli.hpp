#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mshift {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitInvalidInput = 2,
    kExitNotConverged = 3,
};

/// Runs the tool on `args` (without the program name), writing results to `out` and
/// diagnostics to `err`. Returns one of the ExitCode values.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mshift
