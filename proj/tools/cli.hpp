#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hts::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitErrors = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitLimit = 3;

/// Runs one invocation. `args` excludes the program name. Human output goes
/// to `out`, failures to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hts::cli
