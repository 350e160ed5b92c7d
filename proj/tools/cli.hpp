#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semistab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitContractViolation = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line; args excludes the program name. Tables and records
// go to out, diagnostics and usage text to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semistab::cli
