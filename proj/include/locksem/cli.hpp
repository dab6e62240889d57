#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace locksem::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIllFormed = 1;
inline constexpr int kUsageError = 2;

// Runs one `locksem` invocation. `argv[0]` is the program name. Reads trace
// files from disk ("-" is standard input) and writes results to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace locksem::cli
