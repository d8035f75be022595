#pragma once

// Command-line front end. Exit status: 0 success, 1 a checked guarantee
// failed, 2 usage, parameter or file errors.

#include <iosfwd>
#include <string>
#include <vector>

namespace cellprobe {

inline constexpr int kExitOk = 0;
inline constexpr int kExitGuarantee = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace cellprobe
