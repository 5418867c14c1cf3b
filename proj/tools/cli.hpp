#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gtlab::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIoError = 3 };

/// Environment variable consulted for the default --seed.
inline constexpr const char* kSeedEnv = "GTLAB_SEED";

/// Runs one invocation; `args` excludes the program name. Normal output goes
/// to `out`, diagnostics and usage to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gtlab::cli
