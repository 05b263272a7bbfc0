#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zetashift::cli {

/// Exit codes: 0 success, 1 runtime / I/O / verification failure,
/// 2 precondition or schema error (error.json is written to --out).
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitPrecondition = 2;

/// `args` excludes the program name, e.g. {"eval", "--config", "c.json"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zetashift::cli
