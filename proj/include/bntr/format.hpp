#pragma once

// Locale-independent shortest round-trip formatting for floating-point output.

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace bntr {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

}  // namespace bntr
