#pragma once

#include <iosfwd>

namespace stratwave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// Parses argv and runs one subcommand. Diagnostics go to err, help text to out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stratwave::cli
