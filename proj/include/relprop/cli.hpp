#pragma once
// The `relprop` command line: transform, prove, test and check subcommands.

#include <ostream>

namespace relprop {

enum ExitCode { kExitOk = 0, kExitCounterexample = 1, kExitDiagnostics = 2, kExitUnproved = 3 };

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace relprop
