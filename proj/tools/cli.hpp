#pragma once

#include <string>
#include <vector>

namespace pfm::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kData = 3,
    kRuntime = 4,
};

/// Runs the command line (args excludes the program name) and returns the
/// exit code. Logs go to stderr, results to files under --out.
int run(const std::vector<std::string>& args);

}  // namespace pfm::cli
