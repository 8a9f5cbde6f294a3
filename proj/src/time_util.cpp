#include "vcm/time_util.hpp"

#include <cstdio>

namespace vcm {

namespace {

constexpr int64_t kSecondsPerDay = 86400;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Reads exactly `count` digits into `value`; advances `pos`.
bool read_digits(std::string_view s, size_t& pos, int count, int& value) {
    if (pos + count > s.size())
        return false;
    int v = 0;
    for (int i = 0; i < count; ++i) {
        char c = s[pos + i];
        if (!is_digit(c))
            return false;
        v = v * 10 + (c - '0');
    }
    pos += count;
    value = v;
    return true;
}

bool consume(std::string_view s, size_t& pos, char c) {
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

unsigned days_in_month(int year, unsigned month) {
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

}  // namespace

int64_t days_from_civil(int year, unsigned month, unsigned day) {
    year -= month <= 2;
    const int64_t era = (year >= 0 ? year : year - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t days, int& year, unsigned& month, unsigned& day) {
    days += 719468;
    const int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t y = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp < 10 ? mp + 3 : mp - 9;
    year = static_cast<int>(y + (month <= 2));
}

std::optional<int64_t> parse_utc(std::string_view text) {
    size_t pos = 0;
    int year = 0, month = 0, day = 0;
    if (!read_digits(text, pos, 4, year) || !consume(text, pos, '-') ||
        !read_digits(text, pos, 2, month) || !consume(text, pos, '-') ||
        !read_digits(text, pos, 2, day))
        return std::nullopt;
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<int>(days_in_month(year, static_cast<unsigned>(month))))
        return std::nullopt;

    int hour = 0, minute = 0, second = 0;
    int64_t offset = 0;
    if (pos < text.size()) {
        if (text[pos] != 'T' && text[pos] != 't')
            return std::nullopt;
        ++pos;
        if (!read_digits(text, pos, 2, hour) || !consume(text, pos, ':') ||
            !read_digits(text, pos, 2, minute))
            return std::nullopt;
        if (consume(text, pos, ':')) {
            if (!read_digits(text, pos, 2, second))
                return std::nullopt;
        }
        if (consume(text, pos, '.')) {
            size_t start = pos;
            while (pos < text.size() && is_digit(text[pos]))
                ++pos;
            if (pos == start)
                return std::nullopt;
        }
        if (hour > 23 || minute > 59 || second > 60)
            return std::nullopt;
        if (pos < text.size()) {
            char c = text[pos];
            if (c == 'Z' || c == 'z') {
                ++pos;
            } else if (c == '+' || c == '-') {
                ++pos;
                int oh = 0, om = 0;
                if (!read_digits(text, pos, 2, oh) || !consume(text, pos, ':') ||
                    !read_digits(text, pos, 2, om))
                    return std::nullopt;
                offset = static_cast<int64_t>(oh) * 3600 + om * 60;
                if (c == '-')
                    offset = -offset;
            } else {
                return std::nullopt;
            }
        }
    }
    if (pos != text.size())
        return std::nullopt;

    int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    int64_t t = days * kSecondsPerDay + hour * 3600 + minute * 60 + second;
    return t - offset;
}

std::string format_utc(int64_t epoch_seconds) {
    int64_t days = floor_days(epoch_seconds);
    int64_t rem = epoch_seconds - days * kSecondsPerDay;
    int year = 0;
    unsigned month = 0, day = 0;
    civil_from_days(days, year, month, day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", year, month, day,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

int utc_year(int64_t epoch_seconds) {
    int year = 0;
    unsigned month = 0, day = 0;
    civil_from_days(floor_days(epoch_seconds), year, month, day);
    return year;
}

int64_t floor_days(int64_t delta_seconds) {
    int64_t q = delta_seconds / kSecondsPerDay;
    int64_t r = delta_seconds % kSecondsPerDay;
    return r < 0 ? q - 1 : q;
}

}  // namespace vcm
