#pragma once

// Deterministic number formatting shared by every writer: 17
// significant digits round-trips doubles exactly, so identical state
// always serializes to identical bytes.

#include <cstdio>
#include <string>

namespace glueopt::io {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmtg(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace glueopt::io
