#pragma once

// Independent reference computations used only by tests: exact rationals for
// the metric formulas and 50-digit floating point for the statistics.

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace engage::oracle {

using Rational = boost::multiprecision::cpp_rational;
using Big = boost::multiprecision::cpp_bin_float_50;

inline std::optional<Rational> cpki(std::int64_t comments, std::int64_t views) {
  if (views <= 0) return std::nullopt;
  return Rational(comments) * 1000 / Rational(views);
}

inline std::optional<Rational> vpki(std::int64_t likes, std::int64_t dislikes,
                                    std::int64_t views) {
  if (views <= 0) return std::nullopt;
  return (Rational(likes) + Rational(dislikes)) * 1000 / Rational(views);
}

inline std::optional<Rational> disp(std::int64_t likes, std::int64_t dislikes) {
  if (likes + dislikes <= 0) return std::nullopt;
  return Rational(dislikes) / (Rational(likes) + Rational(dislikes));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

struct Moments {
  Big mean, sd, skewness, kurtosis;
};

// Direct-formula sample moments: n-1 variance, adjusted G1 skewness and
// small-sample excess kurtosis G2.
inline Moments moments(const std::vector<double>& xs) {
  const Big n = static_cast<int>(xs.size());
  Big sum = 0;
  for (double x : xs) sum += Big(x);
  const Big mean = sum / n;
  Big m2 = 0, m3 = 0, m4 = 0;
  for (double x : xs) {
    const Big d = Big(x) - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const Big var = m2 / (n - 1);
  const Big sd = sqrt(var);
  Moments m;
  m.mean = mean;
  m.sd = sd;
  m.skewness = n / ((n - 1) * (n - 2)) * (m3 / (sd * sd * sd));
  m.kurtosis = n * (n + 1) / ((n - 1) * (n - 2) * (n - 3)) * (m4 / (var * var)) -
               3 * (n - 1) * (n - 1) / ((n - 2) * (n - 3));
  return m;
}

// Pearson r from the definitional sums in 50-digit precision.
inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const Big n = static_cast<int>(xs.size());
  Big sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += Big(xs[i]);
    sy += Big(ys[i]);
  }
  const Big mx = sx / n, my = sy / n;
  Big sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Big dx = Big(xs[i]) - mx, dy = Big(ys[i]) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  return static_cast<double>(sxy / sqrt(sxx * syy));
}

inline double relative_error(double got, const Big& want) {
  const Big w = want;
  if (w == 0) return static_cast<double>(abs(Big(got)));
  return static_cast<double>(abs((Big(got) - w) / w));
}

}  // namespace engage::oracle
