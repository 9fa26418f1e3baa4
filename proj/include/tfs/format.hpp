// format.hpp: locale-free number printing shared by CSV and JSON output.
#pragma once

#include <string>

namespace tfs {

inline constexpr int kSignificantDigits = 10;

// printf "%.10g". Non-finite values print as nan / inf / -inf.
std::string format_number(double x);

// x rounded to 10 significant digits (the value format_number prints).
double round_significant(double x);

} // namespace tfs
