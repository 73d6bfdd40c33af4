#include "engage/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace engage::fmt {

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out(buf);
  // Avoid "-0.000" for values that round to zero.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

}  // namespace

std::string full(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string grouped(double value, int decimals) {
  std::string text = fixed(value, decimals);
  const std::size_t sign = text.front() == '-' ? 1 : 0;
  std::size_t int_end = text.find('.');
  if (int_end == std::string::npos) int_end = text.size();
  for (std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(int_end) - 3;
       pos > static_cast<std::ptrdiff_t>(sign); pos -= 3) {
    text.insert(static_cast<std::size_t>(pos), 1, ',');
  }
  return text;
}

std::string grouped(std::int64_t value) {
  std::string text = std::to_string(value);
  const std::size_t sign = text.front() == '-' ? 1 : 0;
  for (std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(text.size()) - 3;
       pos > static_cast<std::ptrdiff_t>(sign); pos -= 3) {
    text.insert(static_cast<std::size_t>(pos), 1, ',');
  }
  return text;
}

std::string no_leading_zero(double value, int decimals) {
  std::string text = fixed(value, decimals);
  if (text.rfind("0.", 0) == 0) {
    text.erase(0, 1);
  } else if (text.rfind("-0.", 0) == 0) {
    text.erase(1, 1);
  }
  return text;
}

std::string percent(double fraction, int decimals) {
  return fixed(fraction * 100.0, decimals) + "%";
}

}  // namespace engage::fmt
