#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ppedcrf::cli {

/// Exit codes returned by run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPartial = 3;

/// Runs the tool on `args` (without the program name). Normal output goes to
/// `out`; progress and the one-line JSON error record go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppedcrf::cli
