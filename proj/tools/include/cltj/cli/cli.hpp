#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cltj::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitTimeout = 2;

/// Runs the `cltj` command line. `args` excludes the program name.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cltj::cli
