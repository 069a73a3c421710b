#include "hclim/format.hpp"

#include <cmath>
#include <cstdio>

namespace hclim {

std::string format_sig(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value == 0.0 ? 0.0 : value);
  return buf;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value == 0.0 ? 0.0 : value);
  return buf;
}

}  // namespace hclim
