#include "tfs/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace tfs {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
    return buf;
}

double round_significant(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

} // namespace tfs
