#pragma once

#include <iosfwd>

namespace intermed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. Subcommands: thresholds, sweep,
/// oracle-check, figures. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace intermed::cli
