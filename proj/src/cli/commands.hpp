#pragma once

#include <ostream>
#include <span>
#include <string>

namespace oinfo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitInternal = 70;

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics and progress to `err`. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace oinfo::cli
