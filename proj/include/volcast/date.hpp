#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace volcast {

/// Calendar date stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    Date(int year, unsigned month, unsigned day);

    /// Parses `YYYY-MM-DD`. Throws std::invalid_argument on anything else.
    static Date parse(std::string_view text);

    std::chrono::sys_days days() const { return days_; }
    std::string to_string() const;

    Date operator+(int days) const { return Date(days_ + std::chrono::days(days)); }
    /// Next Monday-to-Friday date strictly after this one.
    Date next_business_day() const;
    Date previous_business_day() const;

    friend constexpr auto operator<=>(const Date&, const Date&) = default;
    friend constexpr bool operator==(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

}  // namespace volcast
