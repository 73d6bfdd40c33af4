#pragma once

#include <optional>
#include <string>

#include "engage/report.hpp"

namespace engage {

enum class Significance { none, p05, p001 };

// p < .001 -> p001, p < .05 -> p05; absent p -> none.
Significance classify_significance(std::optional<double> p_value);
std::string stars(Significance s);
// At least moderate correlation: |r| > .4.
bool is_moderate(double r);

// Markdown text of one correlation cell: r without a leading zero, escaped
// significance stars, and bold for moderate r. "n/a" when undefined.
std::string markdown_cell(const CorrelationCell& cell);

enum class ReportFormat { markdown, csv, json };

std::string render(const ReportBundle& bundle, ReportFormat format);
std::string render_markdown(const ReportBundle& bundle);
std::string render_csv(const ReportBundle& bundle);
std::string render_json(const ReportBundle& bundle);

enum class PlotStyle { text, svg };

inline constexpr int kMaxBarWidth = 40;

// Text: one "label | count | bar" row per bin, with "<first edge" and
// ">last edge" rows when underflow/overflow are non-zero. Bars are one
// column per count unless the largest count exceeds kMaxBarWidth, in which
// case they are scaled to it. Throws std::invalid_argument for a histogram
// without bins.
std::string render_histogram_plot(const Histogram& histogram, PlotStyle style,
                                  const std::string& title = {});

}  // namespace engage
