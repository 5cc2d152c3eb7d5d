#pragma once

#include <string>

namespace epiregime {

/// Calendar date handled as days since 1970-01-01 (proleptic Gregorian).
struct Date {
    long days = 0;

    auto operator<=>(const Date&) const = default;
    Date operator+(long n) const { return Date{days + n}; }
    long operator-(const Date& other) const { return days - other.days; }
};

/// Parse "YYYY-MM-DD"; throws ValidationError on malformed input.
Date parse_date(const std::string& iso);

std::string format_date(Date d);

}  // namespace epiregime
