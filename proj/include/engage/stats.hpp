#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "engage/study_sample.hpp"

namespace engage {

using OptionalValues = std::vector<std::optional<double>>;

// Descriptive statistics of one variable. Statistics are absent when they
// are undefined for the sample at hand: everything at n = 0, std_dev at
// n < 2, skewness at n < 3, kurtosis at n < 4, and both shape moments when
// the sample is constant.
struct SampleSummary {
  std::size_t n = 0;
  std::optional<double> mean;
  std::optional<double> std_dev;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> skewness;
  std::optional<double> kurtosis;  // excess kurtosis
  std::optional<std::string> bin_mode;

  friend bool operator==(const SampleSummary&, const SampleSummary&) = default;
};

// Histogram bin edges. Bins are [e0, e1), [e1, e2), ..., [e(k-1), ek].
struct BinSpec {
  std::vector<double> edges;
  std::vector<std::string> labels;  // empty, or one per bin

  // Throws std::invalid_argument unless there are at least two strictly
  // increasing finite edges and the label count matches.
  void validate() const;
  std::size_t bin_count() const { return edges.empty() ? 0 : edges.size() - 1; }
  std::string label(std::size_t bin) const;

  friend bool operator==(const BinSpec&, const BinSpec&) = default;
};

struct Histogram {
  BinSpec bins;
  std::vector<std::size_t> counts;  // one per bin
  std::size_t underflow = 0;        // below the first edge
  std::size_t overflow = 0;         // above the last edge

  std::size_t total() const;
  // Label of the most populated bin; ties go to the lowest bin. Absent when
  // every bin is empty.
  std::optional<std::string> mode_label() const;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

enum class CorrelationStatus {
  ok,
  insufficient_n,   // fewer than two complete pairs
  constant_series,  // one side has zero variance
};

struct CorrelationCell {
  CorrelationStatus status = CorrelationStatus::insufficient_n;
  std::optional<double> r;
  std::optional<double> p_value;  // absent for n < 3 or |r| = 1
  std::size_t n = 0;

  bool defined() const { return status == CorrelationStatus::ok; }
  friend bool operator==(const CorrelationCell&, const CorrelationCell&) = default;
};

std::string to_string(CorrelationStatus status);

struct NamedColumn {
  std::string name;
  OptionalValues values;
};

// Square symmetric matrix of correlation cells over named variables.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  explicit CorrelationMatrix(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const CorrelationCell& at(std::size_t row, std::size_t col) const {
    return cells_[row * names_.size() + col];
  }
  CorrelationCell& at(std::size_t row, std::size_t col) {
    return cells_[row * names_.size() + col];
  }

  friend bool operator==(const CorrelationMatrix&, const CorrelationMatrix&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<CorrelationCell> cells_;
};

SampleSummary summarize(std::span<const std::optional<double>> values);
SampleSummary summarize(std::span<const std::optional<double>> values,
                        const BinSpec& bins);

// Pearson product-moment correlation over complete pairs, with a two-tailed
// t-test p-value. Throws std::invalid_argument on a length mismatch.
CorrelationCell pearson(std::span<const std::optional<double>> xs,
                        std::span<const std::optional<double>> ys);
CorrelationCell pearson(std::span<const double> xs, std::span<const double> ys);

// Pairwise-deletion correlation matrix, cells computed in parallel.
// Throws std::invalid_argument when column lengths differ.
CorrelationMatrix correlation_matrix(std::span<const NamedColumn> columns);

// Absent values are skipped; NaN counts as absent.
Histogram histogram(std::span<const std::optional<double>> values,
                    const BinSpec& bins);

namespace serial {
CorrelationMatrix correlation_matrix(std::span<const NamedColumn> columns);
Histogram histogram(std::span<const std::optional<double>> values,
                    const BinSpec& bins);
}  // namespace serial

// Set of quartiles (1 = lowest) as a bitmask.
class QuartileSet {
 public:
  constexpr QuartileSet() = default;
  constexpr QuartileSet(std::initializer_list<int> quartiles) {
    for (int q : quartiles) bits_ |= bit(q);
  }
  static constexpr QuartileSet all() { return {1, 2, 3, 4}; }
  static constexpr QuartileSet top_three() { return {2, 3, 4}; }

  constexpr bool contains(int q) const { return (bits_ & bit(q)) != 0; }

 private:
  static constexpr std::uint8_t bit(int q) {
    return q >= 1 && q <= 4 ? static_cast<std::uint8_t>(1u << (q - 1)) : 0;
  }
  std::uint8_t bits_ = 0;
};

struct SampleKey {
  std::string name;
  std::function<std::optional<double>(const VideoStatsSnapshot&)> value;
};

SampleKey views_key();

// Rank-based quartile split. Members are ranked by key ascending (ties by
// video_id) and rank i falls in quartile q when floor((q-1)n/4) <= i <
// floor(qn/4). Retained members keep their input order. Throws
// std::invalid_argument when the key is undefined for some member.
StudySample quartile_filter(const StudySample& sample, const SampleKey& key,
                            QuartileSet keep);

struct CategoryCount {
  std::string category;
  std::size_t count = 0;
  friend bool operator==(const CategoryCount&, const CategoryCount&) = default;
};

// Sorted by count descending, then category name ascending.
std::vector<CategoryCount> category_counts(const StudySample& sample);

}  // namespace engage
