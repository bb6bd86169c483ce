#pragma once

// Command dispatch for the `phaseint` executable.

#include <iosfwd>
#include <string>
#include <vector>

namespace phaseint {

/// Exit codes: 0 success, 1 verification failed, 2 input error.
enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInputError = 2 };

/// Runs one command (`diagram`, `fmatrix`, `weber`, `check-symmetry`,
/// `reduce`, `validate`). JSON goes to `out`, diagnostics to `err`.
/// PHASEINT_TOL overrides the default ODE tolerance.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phaseint
