#pragma once

#include <iosfwd>

namespace depthnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `depthnorm` tool. Subcommands: normalize, depth,
// outliers, calibrate, simulate, report. Returns 0 on success, 1 on a data or
// validation error, 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace depthnorm::cli
