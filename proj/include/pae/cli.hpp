#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pae::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification or reconstruction failed
inline constexpr int kExitUsage = 2;    // bad flags, parameters or files

// Runs one command line. `args` excludes the program name. All output goes
// to the given streams; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pae::cli
