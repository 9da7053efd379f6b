#pragma once

#include <ostream>

namespace sedgkit::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 2,
    kNumericalFailure = 3,
};

/// Entry point of the sedgkit tool. CSV goes to `out` unless --out is given;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sedgkit::cli
