#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kinex::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `kinex` executable: simulate | sweep | fit | empirical.
/// `args` excludes the program name. Diagnostics go to `err`, summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count for sweeps: KINEX_THREADS if set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
std::size_t worker_count();

}  // namespace kinex::cli
