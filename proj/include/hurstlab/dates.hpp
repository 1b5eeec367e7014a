#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace hurstlab {

/// Calendar date (proleptic Gregorian). Total order, ISO-8601 text form,
/// and conversion to a serial day count for arithmetic.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    bool valid() const {
        if (month < 1 || month > 12 || day < 1) return false;
        return day <= days_in_month(year, month);
    }

    /// Days since 1970-01-01 (civil-day algorithm).
    std::int64_t serial() const {
        std::int64_t y = year;
        if (month <= 2) --y;
        const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
        const std::int64_t yoe = y - era * 400;
        const std::int64_t doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
        const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + doe - 719468;
    }

    static Date from_serial(std::int64_t z) {
        z += 719468;
        const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
        const std::int64_t doe = z - era * 146097;
        const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const std::int64_t y = yoe + era * 400;
        const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const std::int64_t mp = (5 * doy + 2) / 153;
        const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
        const std::int64_t m = mp + (mp < 10 ? 3 : -9);
        return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
    }

    Date plus_days(std::int64_t n) const { return from_serial(serial() + n); }

    std::string to_string() const {
        char buf[11];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return std::string(buf);
    }

    /// Parse strict "YYYY-MM-DD". Throws std::invalid_argument on anything else.
    static Date parse(const std::string& text) {
        if (text.size() != 10 || text[4] != '-' || text[7] != '-')
            throw std::invalid_argument("malformed date: '" + text + "'");
        for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
            if (text[i] < '0' || text[i] > '9')
                throw std::invalid_argument("malformed date: '" + text + "'");
        Date d;
        d.year = std::stoi(text.substr(0, 4));
        d.month = std::stoi(text.substr(5, 2));
        d.day = std::stoi(text.substr(8, 2));
        if (!d.valid())
            throw std::invalid_argument("invalid calendar date: '" + text + "'");
        return d;
    }

    static int days_in_month(int y, int m) {
        static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        if (m == 2 && is_leap(y)) return 29;
        return lengths[m - 1];
    }

    static bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }
};

}  // namespace hurstlab
