#pragma once

#include <cstdint>
#include <string>

namespace engage::fmt {

// Shortest decimal text that round-trips to the same double.
std::string full(double value);

// Fixed decimals with thousands separators: 2456693.25 -> "2,456,693.3".
std::string grouped(double value, int decimals);
std::string grouped(std::int64_t value);

// Fixed decimals without a leading zero: 0.7234 -> ".723", -0.05 -> "-.050".
std::string no_leading_zero(double value, int decimals = 3);

// Fraction as a percentage: 0.1044 -> "10.44%".
std::string percent(double fraction, int decimals = 2);

}  // namespace engage::fmt
