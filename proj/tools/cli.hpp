#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace powres::cli {

inline constexpr const char* kSchemaVersion = "1.0";

/// Exit codes: 0 success or Yes, 1 definitive No, 2 usage or guard error.
enum ExitCode : int { kExitYes = 0, kExitNo = 1, kExitUsage = 2 };

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace powres::cli
