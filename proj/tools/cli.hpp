#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oca::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

/// Runs one command line. `args` excludes the program name. Payloads go to
/// `out`, diagnostics and timing summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oca::cli
