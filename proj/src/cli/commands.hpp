#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soqn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitUnstable = 2;

/// Entry point shared by the `soqn` binary and the tests. `args` excludes
/// the program name. Results go to `out` unless --out names a file;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soqn::cli
