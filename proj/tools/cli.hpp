#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace robosig::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kParseFailure = 1,
    kWorkspaceFailure = 2,
    kProtocolFailure = 3,
    kBudgetExceeded = 4,
};

/// Entry point of the `robosig` tool; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robosig::cli
