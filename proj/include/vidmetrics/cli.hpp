#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vidmetrics {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidInput = 1,  // parse, validation or usage errors
    kExitIo = 2,
    kExitInternal = 3,
};

/// Runs one CLI invocation. `args[0]` is the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vidmetrics
