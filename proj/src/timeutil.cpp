#include "sohkit/timeutil.hpp"

#include <cstdio>

namespace sohkit::timeutil {

std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

Minute minute_from_civil(const CivilMinute& c) {
  return days_from_civil(c.year, c.month, c.day) * 1440 + c.hour * 60 +
         c.minute;
}

CivilMinute civil_from_minute(Minute t) {
  std::int64_t days = t / 1440;
  std::int64_t rem = t % 1440;
  if (rem < 0) {
    rem += 1440;
    days -= 1;
  }
  CivilMinute c{};
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(rem / 60);
  c.minute = static_cast<int>(rem % 60);
  return c;
}

namespace {
bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}
}  // namespace

std::optional<Minute> parse_iso_minute(std::string_view s) {
  // strip surrounding whitespace
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  CivilMinute c{};
  if (!read_int(s, 0, 4, c.year)) return std::nullopt;
  if (s.size() < 16 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!read_int(s, 5, 2, c.month) || !read_int(s, 8, 2, c.day)) return std::nullopt;
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
  if (!read_int(s, 11, 2, c.hour)) return std::nullopt;
  if (s[13] != ':') return std::nullopt;
  if (!read_int(s, 14, 2, c.minute)) return std::nullopt;
  std::size_t pos = 16;
  if (pos + 1 <= s.size() && pos < s.size() && s[pos] == ':') {
    int sec = 0;
    if (!read_int(s, pos + 1, 2, sec)) return std::nullopt;
    pos += 3;
  }
  if (pos < s.size() && s[pos] == 'Z') ++pos;
  if (pos != s.size()) return std::nullopt;
  if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 || c.hour > 23 ||
      c.minute > 59)
    return std::nullopt;
  return minute_from_civil(c);
}

std::string format_iso_minute(Minute t) {
  CivilMinute c = civil_from_minute(t);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02dZ", c.year, c.month,
                c.day, c.hour, c.minute);
  return buf;
}

std::string format_date(Minute t) {
  CivilMinute c = civil_from_minute(t);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
  return buf;
}

int month_index(Minute t) {
  CivilMinute c = civil_from_minute(t);
  return c.year * 12 + (c.month - 1);
}

int month_index(int year, int month) { return year * 12 + (month - 1); }

std::string format_month(int month_idx) {
  char buf[12];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", month_idx / 12,
                month_idx % 12 + 1);
  return buf;
}

}  // namespace sohkit::timeutil
