#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cflp/error.hpp"

namespace cflp::text {

// Shortest round-trip form, independent of the locale.
inline std::string fmt(double value)
{
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (std::isnan(value))
        return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

// general format with a fixed number of significant digits
inline std::string fmt(double value, int digits)
{
    if (!std::isfinite(value))
        return fmt(value);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

inline std::string fmt(std::uint64_t value)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(s.substr(start)));
            return out;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

inline double parse_double(std::string_view s)
{
    s = trim(s);
    if (s == "inf" || s == "+inf")
        return INFINITY;
    if (s == "-inf")
        return -INFINITY;
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail(ErrorKind::InvalidArgument, "not a number: '" + std::string(s) + "'");
    return value;
}

inline std::uint64_t parse_u64(std::string_view s)
{
    s = trim(s);
    std::uint64_t value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail(ErrorKind::InvalidArgument, "not a non-negative integer: '" + std::string(s) + "'");
    return value;
}

inline std::vector<double> parse_doubles(std::string_view s, char sep = ',')
{
    std::vector<double> out;
    for (auto part : split(s, sep))
        out.push_back(parse_double(part));
    return out;
}

inline std::string join(const std::vector<double>& values, char sep, int digits = 0)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += sep;
        out += digits > 0 ? fmt(values[i], digits) : fmt(values[i]);
    }
    return out;
}

}  // namespace cflp::text
