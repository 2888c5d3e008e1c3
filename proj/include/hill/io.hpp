#pragma once

#include <array>
#include <charconv>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "hill/errors.hpp"

namespace hill {

/// Shortest decimal representation that round-trips the binary64 value.
inline std::string format_double(double x) {
    std::array<char, 64> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

/// Fixed-count significant-digit representation (for JSON documents).
inline std::string format_double_digits(double x, int digits) {
    std::array<char, 64> buf;
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), x,
                      std::chars_format::general, digits);
    return std::string(buf.data(), res.ptr);
}

inline std::string csv_row(std::initializer_list<double> values) {
    std::string out;
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_double(v);
        first = false;
    }
    out += '\n';
    return out;
}

inline double parse_double(const std::string& text) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    if (begin != end && *begin == '+') ++begin;
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{})
        throw domain_error("could not parse number: '" + text + "'");
    for (const char* p = res.ptr; p != end; ++p)
        if (*p != ' ' && *p != '\t')
            throw domain_error("trailing characters after number: '" + text + "'");
    return value;
}

inline std::vector<double> split_doubles(const std::string& text, char sep = ',') {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = text.find(sep, pos);
        const std::size_t stop = next == std::string::npos ? text.size() : next;
        out.push_back(parse_double(text.substr(pos, stop - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace hill
