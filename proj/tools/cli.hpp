#pragma once

#include <ostream>

namespace slce::cli {

// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slce::cli
