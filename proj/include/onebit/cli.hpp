#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace onebit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command line (without the program name). Tables go to `out`
/// unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace onebit::cli
