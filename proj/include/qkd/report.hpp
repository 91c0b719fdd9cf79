#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qkd/engine.hpp"

namespace qkd {

struct SerializeOptions {
  int precision = 9;  // significant digits, 1..17
  bool timing = false;
};

/// Every floating-point value is rounded to `precision` significant digits and
/// non-finite values become null, so parse → serialize is a fixed point.
Json report_to_json(const Report& report, const SerializeOptions& options = {});
Json optimize_to_json(const OptimizeResult& result, const RunConfig& config, const SerializeOptions& options = {});
Json sweep_to_json(const std::vector<SweepPoint>& curve, std::string_view variable,
                   const SerializeOptions& options = {});

/// Rounds numbers in place (see report_to_json).
void round_numbers(Json& j, int precision);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump_json(const Json& j);

/// `value,rate_per_pulse,rate_bps,qber,aborted` followed by protocol columns.
std::vector<std::string> csv_columns(Protocol protocol);
std::string csv_header(Protocol protocol);
std::string csv_row(const SweepPoint& point, int precision);
std::string sweep_to_csv(const std::vector<SweepPoint>& curve, Protocol protocol, int precision);

}  // namespace qkd
