#pragma once

#include <ostream>

namespace proxinorm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitBudget = 2;

/// Entry point of the `proxinorm` tool. Results go to `out` as JSON,
/// diagnostics to `err`.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace proxinorm
