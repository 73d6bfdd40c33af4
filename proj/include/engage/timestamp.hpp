#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace engage {

// UTC, second precision.
using Timestamp = std::chrono::sys_seconds;

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Timestamp t);

// Accepts "Z" or a numeric "+hh:mm"/"-hh:mm" offset; fractional seconds are
// truncated. Throws std::invalid_argument on malformed input.
Timestamp parse_rfc3339(std::string_view text);

Timestamp now_utc();

}  // namespace engage
