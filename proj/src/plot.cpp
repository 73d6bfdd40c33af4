#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "engage/format.hpp"
#include "engage/render.hpp"

namespace engage {

namespace {

struct Row {
  std::string label;
  std::size_t count;
};

std::vector<Row> plot_rows(const Histogram& h) {
  std::vector<Row> rows;
  if (h.underflow > 0) rows.push_back({"<" + fmt::full(h.bins.edges.front()), h.underflow});
  for (std::size_t i = 0; i < h.counts.size(); ++i) rows.push_back({h.bins.label(i), h.counts[i]});
  if (h.overflow > 0) rows.push_back({">" + fmt::full(h.bins.edges.back()), h.overflow});
  return rows;
}

std::size_t bar_width(std::size_t count, std::size_t max_count) {
  if (max_count <= static_cast<std::size_t>(kMaxBarWidth)) return count;
  if (count == 0) return 0;
  const auto scaled = static_cast<std::size_t>(
      std::llround(static_cast<double>(count) * kMaxBarWidth / static_cast<double>(max_count)));
  return std::max<std::size_t>(scaled, 1);
}

// Display width in code points, so labels such as "≤ 4%" line up.
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string text_plot(const std::vector<Row>& rows, const std::string& title) {
  std::size_t label_w = 0;
  std::size_t count_w = 0;
  std::size_t max_count = 0;
  for (const auto& r : rows) {
    label_w = std::max(label_w, display_width(r.label));
    count_w = std::max(count_w, std::to_string(r.count).size());
    max_count = std::max(max_count, r.count);
  }
  std::ostringstream out;
  if (!title.empty()) out << title << "\n";
  for (const auto& r : rows) {
    const std::string count = std::to_string(r.count);
    std::string line = r.label + std::string(label_w - display_width(r.label), ' ') + " | " +
                       std::string(count_w - count.size(), ' ') + count + " | " +
                       std::string(bar_width(r.count, max_count), '#');
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  }
  return out.str();
}

std::string svg_plot(const std::vector<Row>& rows, const std::string& title) {
  constexpr int kBarSlot = 64;
  constexpr int kBarGap = 8;
  constexpr int kMargin = 40;
  constexpr int kPlotHeight = 200;
  const int width = 2 * kMargin + static_cast<int>(rows.size()) * kBarSlot;
  const int top = title.empty() ? kMargin / 2 : kMargin;
  const int height = top + kPlotHeight + 2 * kMargin;
  std::size_t max_count = 0;
  for (const auto& r : rows) max_count = std::max(max_count, r.count);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << width / 2 << "\" y=\"" << kMargin / 2
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
        << xml_escape(title) << "</text>\n";
  }
  const int baseline = top + kPlotHeight;
  out << "<line x1=\"" << kMargin << "\" y1=\"" << baseline << "\" x2=\"" << width - kMargin
      << "\" y2=\"" << baseline << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int x = kMargin + static_cast<int>(i) * kBarSlot + kBarGap / 2;
    const int h = max_count == 0 ? 0
                                 : static_cast<int>(std::lround(
                                       static_cast<double>(rows[i].count) * kPlotHeight /
                                       static_cast<double>(max_count)));
    out << "<rect x=\"" << x << "\" y=\"" << baseline - h << "\" width=\""
        << kBarSlot - kBarGap << "\" height=\"" << h << "\" fill=\"steelblue\"/>\n";
    const int cx = x + (kBarSlot - kBarGap) / 2;
    out << "<text x=\"" << cx << "\" y=\"" << baseline - h - 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << rows[i].count << "</text>\n";
    out << "<text x=\"" << cx << "\" y=\"" << baseline + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << xml_escape(rows[i].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string render_histogram_plot(const Histogram& histogram, PlotStyle style,
                                  const std::string& title) {
  if (histogram.counts.empty()) throw std::invalid_argument("histogram has no bins");
  const auto rows = plot_rows(histogram);
  return style == PlotStyle::text ? text_plot(rows, title) : svg_plot(rows, title);
}

}  // namespace engage
