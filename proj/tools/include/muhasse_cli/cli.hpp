#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace muhasse::cli {

enum ExitCode : int { kSuccess = 0, kVerdictFailed = 1, kUsageError = 2 };

/// args excludes the program name. `-` as a module path reads from `in`.
int parse_and_dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace muhasse::cli
