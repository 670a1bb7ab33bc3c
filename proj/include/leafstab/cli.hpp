#pragma once

// Command dispatch for the leafstab tool. Kept in the library so tests can run
// commands in-process.

#include <string>
#include <vector>

namespace leafstab {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNoConvergence = 3 };

struct CliResult {
  int exit_code = kExitOk;
  std::string output;  // report or help text
  std::string error;   // diagnostics
};

/// args excludes the program name, e.g. {"criteria", "--preset", "s2xs2"}.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace leafstab
