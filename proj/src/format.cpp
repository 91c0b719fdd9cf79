#include "qkd/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "qkd/error.hpp"

namespace qkd {

std::string format_number(double value, int precision) {
  if (value == 0.0) return "0";  // also folds −0
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, precision);
  return {buf.data(), res.ptr};
}

double round_significant(double value, int precision) {
  if (value == 0.0 || !std::isfinite(value)) return value == 0.0 ? 0.0 : value;
  return parse_number(format_number(value, precision));
}

double parse_number(std::string_view text) {
  double out = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last || first == last) {
    fail(Errc::invalid_config, "not a number: '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace qkd
