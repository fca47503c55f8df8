#pragma once

/// \file
/// Command-line front end: one subcommand per analysis, CSV on output.

#include <ostream>
#include <string>
#include <vector>

namespace hvi::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

/// `lo:hi:count` (count >= 2, lo < hi) or a single number.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  std::vector<double> values() const;
  bool scalar() const noexcept { return count == 1; }
};

/// Throws std::invalid_argument on malformed text.
Range parse_range(const std::string& text);

/// Parses argv (argv[0] is the program name) and runs the subcommand.
/// Diagnostics go to `err`; CSV goes to --out or else to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hvi::cli
