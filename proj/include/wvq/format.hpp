#pragma once

#include <charconv>
#include <string>

namespace wvq {

// Shortest round-trip decimal representation; deterministic across runs.
inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace wvq
