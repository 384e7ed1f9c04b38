#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace cfmac {

// Canonical number formatting for emitted files: 12 significant digits,
// shortest form. All CSV and JSON values go through this so reruns are
// byte-identical.
inline std::string to_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Round-trips a value through the emitted representation.
inline double g12_value(double v) {
    return std::strtod(to_g12(v).c_str(), nullptr);
}

} // namespace cfmac
