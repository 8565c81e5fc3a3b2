#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace sgd {

// 17 significant digits: enough to round-trip an IEEE double exactly.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// One LF-terminated CSV row.
inline void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) os << ',';
    os << cells[k];
  }
  os << '\n';
}

}  // namespace sgd
