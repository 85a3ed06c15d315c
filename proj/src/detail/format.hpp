#pragma once

#include <charconv>
#include <string>

namespace fractime::detail {

/// Shortest round-trip decimal form, independent of the C locale.
inline std::string fmt_num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

/// Fixed number of significant digits, independent of the C locale.
inline std::string fmt_sig(double v, int digits) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  return std::string(buf, p);
}

}  // namespace fractime::detail
