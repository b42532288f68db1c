#pragma once

#include <cstdio>
#include <string>

namespace mbm::detail {

// 17 significant digits: round-trips every double through text.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace mbm::detail
