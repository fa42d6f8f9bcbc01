#pragma once

#include <ostream>

namespace copulacpd {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 2,
    kExitConfig = 3,
    kExitNumeric = 4,
};

/// Entry point of the `copulacpd` tool. Documents go to `out` (or to files named by --out),
/// diagnostics and progress to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace copulacpd
