#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sauce::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kUsageError = 2;

/// Runs one CLI invocation. `args` excludes the program name. JSON summaries
/// go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sauce::cli
