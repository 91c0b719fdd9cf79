#pragma once

#include <string>
#include <string_view>

namespace qkd {

/// Shortest decimal rendering with at most `precision` significant digits.
/// Locale-independent; always uses '.' and never emits thousands separators.
std::string format_number(double value, int precision);

/// `value` rounded to `precision` significant decimal digits.
double round_significant(double value, int precision);

/// Strict, locale-independent parse of a whole string as a double. Throws
/// Errc::invalid_config on trailing garbage.
double parse_number(std::string_view text);

}  // namespace qkd
