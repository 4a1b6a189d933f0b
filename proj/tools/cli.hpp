#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spectra::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kNumerical = 3,
    kOracleRefusal = 4,
};

struct Outcome {
    int exit_code = kOk;
    std::string json;  ///< document written to stdout (also on failure, with an `error` field)
};

/// Runs one invocation; args excludes the program name. Diagnostics and help
/// text go to `err`. SPECTRA_COUNT_THREADS is consulted when --threads is absent.
Outcome run(const std::vector<std::string>& args, std::ostream& err);

int main_entry(int argc, char** argv);

}  // namespace spectra::cli
