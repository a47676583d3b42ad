#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sohkit::timeutil {

// All timestamps are minutes since the Unix epoch, UTC.
using Minute = std::int64_t;

struct CivilMinute {
  int year;
  int month;  // 1..12
  int day;    // 1..31
  int hour;   // 0..23
  int minute; // 0..59
};

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d);
void civil_from_days(std::int64_t z, int& y, int& m, int& d);

Minute minute_from_civil(const CivilMinute& c);
CivilMinute civil_from_minute(Minute t);

// Accepts ISO-8601 "YYYY-MM-DDTHH:MM", optional ":SS", optional trailing "Z",
// and a space instead of 'T'. Seconds are truncated to the minute.
std::optional<Minute> parse_iso_minute(std::string_view s);

// Emits "YYYY-MM-DDTHH:MMZ" (minute cadence, Table-style).
std::string format_iso_minute(Minute t);
std::string format_date(Minute t);  // "YYYY-MM-DD"

// Calendar month index: year * 12 + (month - 1). Used for monthly grouping.
int month_index(Minute t);
int month_index(int year, int month);
std::string format_month(int month_idx);  // "YYYY-MM"

inline constexpr double kMinutesPerYear = 525949.2;  // mean Gregorian year

}  // namespace sohkit::timeutil
