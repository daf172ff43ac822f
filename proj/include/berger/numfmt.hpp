#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace berger {

/// 17 significant digits, enough for a double to round-trip.
inline std::string fmt17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace berger
