#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lisible::cli {

inline constexpr const char* kVersion = "0.3.0";

/// Runs one command line (without the program name). Machine-readable output
/// goes to `out`, diagnostics to `err`. Returns 0, 1 (bad input or usage) or
/// 2 (internal failure).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lisible::cli
