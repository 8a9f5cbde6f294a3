#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vcm {

// Proleptic Gregorian civil-calendar conversions, all UTC. Timestamps are
// seconds since the Unix epoch throughout the codebase.
int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(int64_t days, int& year, unsigned& month, unsigned& day);

// Accepts "YYYY-MM-DD", optionally followed by "THH:MM[:SS[.frac]]" and a
// trailing "Z" or "+HH:MM"/"-HH:MM" offset. A missing offset is read as UTC.
// NVD feeds use the minute-precision form "2019-01-02T12:00Z".
std::optional<int64_t> parse_utc(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_utc(int64_t epoch_seconds);

int utc_year(int64_t epoch_seconds);

// floor(delta / 86400), exact for negative deltas.
int64_t floor_days(int64_t delta_seconds);

}  // namespace vcm
