#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace shuttle::units {

inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;
inline constexpr double ns = 1e-9;
inline constexpr double us = 1e-6;
inline constexpr double per_um = 1e6;
inline constexpr double per_ns = 1e9;

/// `si / unit` rounded to 12 significant digits, so configuration values
/// survive a JSON round trip unchanged.
inline double in_units(double si, double unit) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", si / unit);
  return std::strtod(buf, nullptr);
}

} // namespace shuttle::units
