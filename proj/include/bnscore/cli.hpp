#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bnscore::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitUsageError = 3;

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 2 when an input file cannot be read or parsed, 3 for usage and validation
/// errors.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace bnscore::cli
