#pragma once

#include <iosfwd>

namespace semibiv {

enum ExitCode : int {
    kExitOk = 0,
    kExitReproductionFailed = 1,
    kExitUsage = 2,
    kExitInvalid = 3,
    kExitInconclusive = 4,
    kExitIo = 5,
};

// Entry point of the command-line tool; all output goes to `out` / `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semibiv
