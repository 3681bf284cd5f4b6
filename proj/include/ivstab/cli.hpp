#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ivstab {

enum ExitCode : int {
    kExitStable = 0,
    kExitUnstable = 1,
    kExitInconclusive = 2,
    kExitInputError = 3,
    kExitFailure = 4,
};

/// Runs the command line `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ivstab
