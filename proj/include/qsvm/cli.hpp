#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsvm {

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitTrend = 3,
};

/// Entry point of the `qsvm` tool; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsvm
