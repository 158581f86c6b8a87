#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace baserate::cli {

inline constexpr const char* kVersion = "baserate 1.0.0";

/// Exit codes: 0 success, 1 internal error, 2 usage or validation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace baserate::cli
