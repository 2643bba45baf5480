#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "mistrust/common.hpp"

namespace mistrust {

// Timestamps are stored as integer minutes since 1970-01-01 00:00. Inputs use
// "YYYY-MM-DD HH:MM:SS"; seconds are accepted and truncated to the minute.

namespace detail {

// Days from civil date, proleptic Gregorian (Howard Hinnant's algorithm).
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = yr + (m <= 2);
}

inline bool days_in_month_ok(std::int64_t y, unsigned m, unsigned d) {
    static constexpr unsigned lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    unsigned max_d = lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) max_d = 29;
    return d <= max_d;
}

inline bool parse_uint(std::string_view s, unsigned& out) {
    if (s.empty()) return false;
    unsigned v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<unsigned>(c - '0');
    }
    out = v;
    return true;
}

}  // namespace detail

inline std::optional<std::int64_t> parse_timestamp(std::string_view s) {
    s = trim(s);
    // YYYY-MM-DD HH:MM:SS (19 chars) or without seconds (16 chars)
    if (s.size() != 19 && s.size() != 16) return std::nullopt;
    if (s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':') return std::nullopt;
    if (s.size() == 19 && s[16] != ':') return std::nullopt;
    unsigned y, mo, d, h, mi, sec = 0;
    if (!detail::parse_uint(s.substr(0, 4), y) || !detail::parse_uint(s.substr(5, 2), mo) ||
        !detail::parse_uint(s.substr(8, 2), d) || !detail::parse_uint(s.substr(11, 2), h) ||
        !detail::parse_uint(s.substr(14, 2), mi))
        return std::nullopt;
    if (s.size() == 19 && !detail::parse_uint(s.substr(17, 2), sec)) return std::nullopt;
    if (!detail::days_in_month_ok(y, mo, d) || h > 23 || mi > 59 || sec > 59) return std::nullopt;
    const std::int64_t days = detail::days_from_civil(y, mo, d);
    return days * 1440 + static_cast<std::int64_t>(h) * 60 + mi;
}

inline std::string format_timestamp(std::int64_t minutes) {
    std::int64_t days = minutes / 1440;
    std::int64_t rem = minutes % 1440;
    if (rem < 0) {
        rem += 1440;
        days -= 1;
    }
    std::int64_t y;
    unsigned mo, d;
    detail::civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u %02lld:%02lld:00",
                  static_cast<long long>(y), mo, d, static_cast<long long>(rem / 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace mistrust
