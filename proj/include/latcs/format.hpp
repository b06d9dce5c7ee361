#pragma once

#include <cstdio>
#include <string>

namespace latcs {

/// Shortest round-trippable decimal form of a double. Used by every CSV and
/// JSON writer so that identical runs produce byte-identical files.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace latcs
