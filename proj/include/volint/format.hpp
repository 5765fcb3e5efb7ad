#pragma once

#include <cstdio>
#include <string>

namespace volint {

/// Round-trippable, locale-independent text for a double.
inline std::string fmt_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Fixed-width scientific text used in human-readable tables.
inline std::string fmt_sci(double v, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

} // namespace volint
