#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qkd/engine.hpp"

namespace qkd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAbort = 2;

/// `start:stop:steps`, inclusive of both ends.
std::vector<double> parse_range(std::string_view spec);
/// Comma-separated numbers.
std::vector<double> parse_values(std::string_view spec);
/// `mu=a:b,nu=c:d`; a missing parameter keeps its configured value fixed.
OptimizeBounds parse_bounds(std::string_view spec, const IntensitySet& current);

/// Entry point of the qkdsim tool. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qkd
