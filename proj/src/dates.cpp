#include "longmem/dates.hpp"

#include "longmem/errors.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace longmem {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static const std::array<int, 12> base = {31, 28, 31, 30, 31, 30,
                                             31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return base[m - 1];
}

// Howard Hinnant's days_from_civil.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool all_digits(const std::string& s, size_t from, size_t to) {
    if (from >= to || to > s.size()) return false;
    for (size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

std::int64_t Date::serial() const {
    return days_from_civil(year, month, day);
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date parse_date(const std::string& text) {
    Date d;
    if (text.size() == 10 && text[4] == '-' && text[7] == '-' &&
        all_digits(text, 0, 4) && all_digits(text, 5, 7) &&
        all_digits(text, 8, 10)) {
        d.year = std::stoi(text.substr(0, 4));
        d.month = std::stoi(text.substr(5, 2));
        d.day = std::stoi(text.substr(8, 2));
    } else {
        // MM/DD/YYYY, with 1- or 2-digit month/day fields.
        size_t s1 = text.find('/');
        size_t s2 = (s1 == std::string::npos) ? std::string::npos
                                              : text.find('/', s1 + 1);
        if (s1 == std::string::npos || s2 == std::string::npos ||
            !all_digits(text, 0, s1) || !all_digits(text, s1 + 1, s2) ||
            !all_digits(text, s2 + 1, text.size())) {
            throw input_error("unparseable date: '" + text + "'");
        }
        d.month = std::stoi(text.substr(0, s1));
        d.day = std::stoi(text.substr(s1 + 1, s2 - s1 - 1));
        d.year = std::stoi(text.substr(s2 + 1));
    }
    if (d.year < 1 || d.month < 1 || d.month > 12 || d.day < 1 ||
        d.day > days_in_month(d.year, d.month)) {
        throw input_error("impossible calendar date: '" + text + "'");
    }
    return d;
}

Date add_days(const Date& d, std::int64_t n) {
    Date out;
    civil_from_days(d.serial() + n, out.year, out.month, out.day);
    return out;
}

}  // namespace longmem
