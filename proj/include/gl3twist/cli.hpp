#pragma once

/**
 * @file cli.hpp
 * @brief Command-line entry point. Exit codes: 0 all checks pass, 1 a
 *        numerical check failed, 2 usage or configuration error.
 */

#include <iosfwd>

namespace gl3twist {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand; summaries go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gl3twist
