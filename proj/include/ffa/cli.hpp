#pragma once

// Command-line front end: synth, verify, cost, simulate.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 data/shape error.

#include <iosfwd>
#include <string>
#include <vector>

namespace ffa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ffa
