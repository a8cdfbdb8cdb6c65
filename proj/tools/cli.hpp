#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iprior::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name. Results go to
/// files named by flags; the one-line summary goes to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iprior::cli
