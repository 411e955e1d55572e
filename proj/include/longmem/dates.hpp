#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace longmem {

// Calendar date. Ordering is by the proleptic-Gregorian day number, so
// series validation and CSV sorting do not depend on string formats.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    // Days since 1970-01-01 (negative before).
    std::int64_t serial() const;
    std::string to_string() const;  // ISO 8601, YYYY-MM-DD

    friend bool operator==(const Date& a, const Date& b) {
        return a.year == b.year && a.month == b.month && a.day == b.day;
    }
    friend std::strong_ordering operator<=>(const Date& a, const Date& b) {
        return a.serial() <=> b.serial();
    }
};

// Accepts ISO 8601 (YYYY-MM-DD) and MM/DD/YYYY. Throws input_error on
// anything else, including impossible calendar dates.
Date parse_date(const std::string& text);

// Date offset by n calendar days; used by the simulators to stamp
// synthetic series.
Date add_days(const Date& d, std::int64_t n);

}  // namespace longmem
