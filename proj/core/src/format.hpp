#pragma once

#include <cstdio>
#include <string>

namespace phidim::detail {

/// Shortest-ish decimal form with `digits` significant digits.
inline std::string fmt_num(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace phidim::detail
