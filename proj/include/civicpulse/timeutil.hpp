#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace civicpulse {

struct CivilDateTime {
    int year = 1970;
    unsigned month = 1;  // 1-12
    unsigned day = 1;    // 1-31
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;
};

std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

std::int64_t epoch_from_civil(const CivilDateTime& c);
CivilDateTime civil_from_epoch(std::int64_t seconds);

/// 0 = Monday ... 6 = Sunday
int weekday_from_days(std::int64_t days);

inline const char* const kWeekdayNames[7] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};

/// Parses "YYYY-MM-DDTHH:MM:SS[.frac](Z|±hh:mm)" to UTC epoch seconds.
/// Fractional seconds are truncated. Returns nullopt on malformed input.
std::optional<std::int64_t> parse_rfc3339(std::string_view s);

std::string format_rfc3339(std::int64_t epoch_seconds);

}  // namespace civicpulse
