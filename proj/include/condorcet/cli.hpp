#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace condorcet::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kResourceCap = 2;
inline constexpr int kIoError = 3;

/// Runs the tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace condorcet::cli
