#pragma once

// Small helpers shared by the delimiter-separated readers and writers.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sigdt/error.hpp"

namespace sigdt::csv {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

inline std::int64_t parse_int(std::string_view s, std::size_t line, const char* what) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError(std::string("invalid ") + what + " '" + std::string(s) + "'", line);
    }
    return v;
}

inline double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError("invalid number '" + std::string(s) + "'", line);
    }
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(s) + "'", line);
    return v;
}

/// Shortest representation that parses back to the same double.
inline void append_double(std::string& out, double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

/// Parses a `dims=<n>` header line.
inline std::size_t parse_dims_header(std::string_view line) {
    line = trim(line);
    constexpr std::string_view prefix = "dims=";
    if (line.substr(0, prefix.size()) != prefix) {
        throw ParseError("expected header 'dims=<n>'", 1);
    }
    const auto n = parse_int(line.substr(prefix.size()), 1, "dimensionality");
    if (n <= 0) throw ParseError("dimensionality must be positive", 1);
    return static_cast<std::size_t>(n);
}

}  // namespace sigdt::csv
