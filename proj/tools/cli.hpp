#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sinekernel::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Runs one command. `args` excludes the program name. Tables and reports go
/// to `out`; diagnostics and help for usage errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// A double with 17 significant digits, independent of the locale.
/// Non-finite values give "nan", "inf", "-inf".
std::string format_number(double v);

/// Inclusive grid "a:b:n" with n points. Throws std::invalid_argument.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace sinekernel::cli
