#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ftbn::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidModel = 2,
    kIoOrParse = 3,
    kImpossibleEvidence = 4,
    kUsage = 5,
};

/// Runs `ftbn <command> <path> [options]`; args exclude the program name.
/// Reports go to `out` (or --out), diagnostics and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ftbn::cli
