#pragma once

// Small string helpers shared by the text formats.

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "radhough/error.hpp"

namespace radhough::detail {

/// Round-trippable decimal form of a double.
inline std::string format_real(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

inline std::string join_reals(const std::vector<double>& values, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format_real(values[i]);
  }
  return out;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError("not a number: '" + std::string(s) + "'");
  return v;
}

inline long parse_long(std::string_view s) {
  s = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError("not an integer: '" + std::string(s) + "'");
  return v;
}

inline std::vector<double> parse_reals(std::string_view s, char sep = ',') {
  std::vector<double> out;
  for (auto part : split(s, sep)) out.push_back(parse_real(part));
  return out;
}

}  // namespace radhough::detail
