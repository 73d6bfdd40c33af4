#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "engage/metrics.hpp"
#include "engage/stats.hpp"
#include "engage/study_sample.hpp"

namespace engage {

// Per-metric histogram bins.
struct MetricBins {
  BinSpec cpki;
  BinSpec vpki;
  BinSpec disp;

  friend bool operator==(const MetricBins&, const MetricBins&) = default;
};

// Approximate bins modelled on the published bin-mode labels; the exact
// published edges are unknown.
MetricBins default_bins();

// Reads a JSON object with optional "cpki", "vpki", "disp" members of the
// form {"edges": [...], "labels": [...]}; missing members keep `base`.
// Throws ConfigError on a malformed file.
MetricBins load_bins(const std::filesystem::path& path, MetricBins base = default_bins());

struct VariableSummary {
  std::string variable;
  SampleSummary summary;
  friend bool operator==(const VariableSummary&, const VariableSummary&) = default;
};

struct MetricHistogram {
  std::string metric;  // "cpki", "vpki" or "disp"
  std::string title;
  Histogram histogram;
  friend bool operator==(const MetricHistogram&, const MetricHistogram&) = default;
};

struct Provenance {
  std::string selection_note;
  std::string first_fetch;  // RFC 3339, empty for an empty sample
  std::string last_fetch;
  std::vector<std::string> coverage_notes;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Table identifiers used for annotations and CSV sections.
namespace table {
inline constexpr const char* kBasic = "descriptive_basic";
inline constexpr const char* kMetrics = "descriptive_metrics";
inline constexpr const char* kCorrFull = "correlation_full";
inline constexpr const char* kCorrUpper = "correlation_upper_quartiles";
inline constexpr const char* kHistograms = "histograms";
inline constexpr const char* kCategories = "categories";
}  // namespace table

struct ReportBundle {
  StudySample sample;
  std::vector<EngagementMetrics> metrics;  // aligned with sample
  MetricBins bins;

  std::vector<VariableSummary> summary_basic;    // Views, Comments, Votes
  std::vector<VariableSummary> summary_metrics;  // CpkI, VpkI, DisP
  CorrelationMatrix corr_full;
  CorrelationMatrix corr_upper_quartiles;
  std::size_t upper_quartile_n = 0;
  std::vector<MetricHistogram> histograms;
  std::vector<CategoryCount> categories;
  Provenance provenance;
  // Per-table problems (insufficient n, missing coverage); never fatal.
  std::map<std::string, std::vector<std::string>> annotations;

  friend bool operator==(const ReportBundle&, const ReportBundle&) = default;
};

// Correlation variable order, matching the published tables.
const std::vector<std::string>& correlation_variables();

// Computes every table for the sample. Deterministic for identical input.
// Throws std::invalid_argument for an empty sample.
ReportBundle build_report(const StudySample& sample, const MetricBins& bins = default_bins());

// Full-precision JSON form; also the on-disk bundle format.
std::string bundle_to_json(const ReportBundle& bundle);
// Throws ParseError on malformed input.
ReportBundle bundle_from_json(std::string_view text);

}  // namespace engage
