#include "volcast/date.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace volcast {

namespace {

bool parse_uint(std::string_view s, unsigned& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_weekend(std::chrono::sys_days d) {
    const std::chrono::weekday wd{d};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date");
    }
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    unsigned y = 0, m = 0, d = 0;
    if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
        !parse_uint(text.substr(8, 2), d)) {
        throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    return Date(static_cast<int>(y), m, d);
}

std::string Date::to_string() const {
    const std::chrono::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date Date::next_business_day() const {
    auto d = days_ + std::chrono::days(1);
    while (is_weekend(d)) d += std::chrono::days(1);
    return Date(d);
}

Date Date::previous_business_day() const {
    auto d = days_ - std::chrono::days(1);
    while (is_weekend(d)) d -= std::chrono::days(1);
    return Date(d);
}

}  // namespace volcast
