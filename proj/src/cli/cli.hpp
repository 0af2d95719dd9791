#pragma once

#include <iosfwd>

namespace itt::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;        // unreadable input, parse error on a single input
inline constexpr int kBadConfig = 2;      // invalid flags or selector
inline constexpr int kPartialFailure = 3; // some inputs of a batch failed

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace itt::cli
