#pragma once

#include <charconv>
#include <string>

namespace riskdp {

/// Shortest round-trip decimal form of a double; locale-free, so identical
/// inputs print identically on every platform.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace riskdp
