#pragma once

#include <string>

namespace hclim {

/// printf-style "%.6g": six significant digits, used for all CSV output.
std::string format_sig(double value, int digits = 6);

/// Fixed-point with the given number of decimals (human-readable tables).
std::string format_fixed(double value, int decimals = 2);

}  // namespace hclim
