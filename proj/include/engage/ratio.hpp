#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace engage {

// Exact rational with a positive denominator, kept in lowest terms.
class Ratio {
 public:
  constexpr Ratio() = default;

  constexpr Ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("Ratio with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  constexpr std::int64_t numerator() const { return num_; }
  constexpr std::int64_t denominator() const { return den_; }

  // Correctly rounded whenever |num| and den are below 2^53.
  constexpr double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend constexpr bool operator==(const Ratio&, const Ratio&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace engage
