#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qkr {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumericalGuard = 3;

/// Runs the `qkr` command line. args[0] is the program name. Returns the
/// process exit code; diagnostics go to `err`, progress to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkr
