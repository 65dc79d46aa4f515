#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <system_error>

namespace kerrlambda {

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

inline double parse_number(const std::string& s) {
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return x;
}

}  // namespace kerrlambda
