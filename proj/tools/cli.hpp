#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hciz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitPrecision = 3;

/// Runs one subcommand (measure, transform, exact, mc, bounds, converge,
/// dilute). `args` excludes the program name. Results go to `out` unless
/// --output is given; diagnostics go to `err` as one JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hciz::cli
