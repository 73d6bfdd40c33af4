#include "engage/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "engage/format.hpp"

namespace engage {

namespace {

std::string join(const std::vector<std::string>& cells, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += sep;
    out += cells[i];
  }
  return out;
}

std::string md_row(const std::vector<std::string>& cells) {
  return "| " + join(cells, " | ") + " |\n";
}

std::string md_rule(std::size_t value_columns) {
  std::string out = "|---|";
  for (std::size_t i = 0; i < value_columns; ++i) out += "---:|";
  return out + "\n";
}

std::string or_dash(const std::optional<double>& v, std::string (*f)(double)) {
  return v ? f(*v) : "–";
}

std::string count_stat(double v) { return fmt::grouped(v, 1); }
std::string count_extreme(double v) { return fmt::grouped(static_cast<std::int64_t>(std::llround(v))); }
std::string three(double v) { return fmt::grouped(v, 3); }
std::string pct(double v) { return fmt::percent(v); }

void notes_block(std::ostringstream& out, const ReportBundle& b, const char* table) {
  const auto it = b.annotations.find(table);
  if (it == b.annotations.end()) return;
  out << "\n";
  for (const auto& note : it->second) out << "> Note: " << note << "\n";
}

std::pair<std::size_t, std::size_t> pairwise_n_range(const CorrelationMatrix& m) {
  std::size_t lo = SIZE_MAX;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      lo = std::min(lo, m.at(i, j).n);
      hi = std::max(hi, m.at(i, j).n);
    }
  }
  if (lo == SIZE_MAX) lo = hi;
  return {lo, hi};
}

void correlation_table(std::ostringstream& out, const CorrelationMatrix& m) {
  if (m.size() == 0) return;
  std::vector<std::string> header{""};
  for (const auto& name : m.names()) header.push_back(name);
  out << md_row(header) << md_rule(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<std::string> row{m.names()[i]};
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j > i) {
        row.emplace_back();
      } else if (j == i) {
        row.push_back(m.at(i, i).defined() ? "1" : "n/a");
      } else {
        row.push_back(markdown_cell(m.at(i, j)));
      }
    }
    out << md_row(row);
  }
  const auto [lo, hi] = pairwise_n_range(m);
  out << "\n\\* p < .05, \\*\\* p < .001 (two-tailed); bold marks |r| > .4. ";
  if (lo == hi) {
    out << "Every cell uses n = " << lo << ".\n";
  } else {
    out << "Pairwise deletion: cell n ranges from " << lo << " to " << hi << ".\n";
  }
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_num(const std::optional<double>& v) { return v ? fmt::full(*v) : ""; }

void csv_summary(std::ostringstream& out, const char* table,
                 const std::vector<VariableSummary>& list) {
  out << "# " << table << "\n"
      << "variable,n,mean,std_dev,min,max,skewness,kurtosis,bin_mode\n";
  for (const auto& v : list) {
    const auto& s = v.summary;
    out << csv_field(v.variable) << ',' << s.n << ',' << csv_num(s.mean) << ','
        << csv_num(s.std_dev) << ',' << csv_num(s.min) << ',' << csv_num(s.max) << ','
        << csv_num(s.skewness) << ',' << csv_num(s.kurtosis) << ','
        << csv_field(s.bin_mode.value_or("")) << "\n";
  }
  out << "\n";
}

void csv_matrix(std::ostringstream& out, const char* table, const CorrelationMatrix& m) {
  out << "# " << table << "\n" << "row,column,r,p_value,n,status\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto& c = m.at(i, j);
      out << csv_field(m.names()[i]) << ',' << csv_field(m.names()[j]) << ','
          << csv_num(c.r) << ',' << csv_num(c.p_value) << ',' << c.n << ','
          << to_string(c.status) << "\n";
    }
  }
  out << "\n";
}

}  // namespace

Significance classify_significance(std::optional<double> p_value) {
  if (!p_value) return Significance::none;
  if (*p_value < 0.001) return Significance::p001;
  if (*p_value < 0.05) return Significance::p05;
  return Significance::none;
}

std::string stars(Significance s) {
  switch (s) {
    case Significance::p001: return "**";
    case Significance::p05: return "*";
    case Significance::none: break;
  }
  return "";
}

bool is_moderate(double r) { return std::fabs(r) > 0.4; }

std::string markdown_cell(const CorrelationCell& cell) {
  if (!cell.defined() || !cell.r) return "n/a";
  std::string text = fmt::no_leading_zero(*cell.r, 3);
  for (char c : stars(classify_significance(cell.p_value))) {
    text += '\\';
    text += c;
  }
  if (is_moderate(*cell.r)) text = "**" + text + "**";
  return text;
}

std::string render(const ReportBundle& bundle, ReportFormat format) {
  switch (format) {
    case ReportFormat::markdown: return render_markdown(bundle);
    case ReportFormat::csv: return render_csv(bundle);
    case ReportFormat::json: return render_json(bundle);
  }
  return {};
}

std::string render_json(const ReportBundle& bundle) { return bundle_to_json(bundle); }

std::string render_markdown(const ReportBundle& b) {
  std::ostringstream out;
  out << "# Engagement report\n\n";
  out << "## Sample\n\n";
  out << "- Videos analysed: " << b.sample.size() << "\n";
  if (!b.provenance.selection_note.empty()) {
    out << "- Selection: " << b.provenance.selection_note << "\n";
  }
  if (!b.provenance.first_fetch.empty()) {
    out << "- Fetched: " << b.provenance.first_fetch << " to " << b.provenance.last_fetch
        << "\n";
  }
  for (const auto& note : b.provenance.coverage_notes) out << "- Coverage: " << note << "\n";

  out << "\n## Basic statistics\n\n";
  {
    std::vector<std::string> header{""};
    for (const auto& v : b.summary_basic) header.push_back(v.variable);
    out << md_row(header) << md_rule(b.summary_basic.size());
    const auto row = [&](const std::string& name, auto get) {
      std::vector<std::string> cells{name};
      for (const auto& v : b.summary_basic) cells.push_back(get(v.summary));
      out << md_row(cells);
    };
    row("N", [](const SampleSummary& s) { return std::to_string(s.n); });
    row("Average", [](const SampleSummary& s) { return or_dash(s.mean, count_stat); });
    row("Std. Dev.", [](const SampleSummary& s) { return or_dash(s.std_dev, count_stat); });
    row("Minimum", [](const SampleSummary& s) { return or_dash(s.min, count_extreme); });
    row("Maximum", [](const SampleSummary& s) { return or_dash(s.max, count_extreme); });
  }
  notes_block(out, b, table::kBasic);

  out << "\n## Engagement metrics\n\n";
  {
    std::vector<std::string> header{""};
    for (const auto& v : b.summary_metrics) header.push_back(v.variable);
    out << md_row(header) << md_rule(b.summary_metrics.size());
    const auto row = [&](const std::string& name, auto get) {
      std::vector<std::string> cells{name};
      for (const auto& v : b.summary_metrics) {
        const bool share = v.variable == "DisP";
        cells.push_back(get(v.summary, share ? pct : three));
      }
      out << md_row(cells);
    };
    using Fmt = std::string (*)(double);
    row("Valid N", [](const SampleSummary& s, Fmt) { return std::to_string(s.n); });
    row("Mean", [](const SampleSummary& s, Fmt f) { return or_dash(s.mean, f); });
    row("Std. Dev.", [](const SampleSummary& s, Fmt f) { return or_dash(s.std_dev, f); });
    row("Bin Mode", [](const SampleSummary& s, Fmt) { return s.bin_mode.value_or("–"); });
    row("Skewness", [](const SampleSummary& s, Fmt) { return or_dash(s.skewness, three); });
    row("Kurtosis", [](const SampleSummary& s, Fmt) { return or_dash(s.kurtosis, three); });
    row("Minimum", [](const SampleSummary& s, Fmt f) { return or_dash(s.min, f); });
    row("Maximum", [](const SampleSummary& s, Fmt f) { return or_dash(s.max, f); });
  }
  out << "\nSkewness is the adjusted Fisher-Pearson coefficient; kurtosis is excess "
         "kurtosis with the small-sample correction.\n";
  notes_block(out, b, table::kMetrics);

  out << "\n## Correlations, full sample (N = " << b.sample.size() << ")\n\n";
  correlation_table(out, b.corr_full);
  notes_block(out, b, table::kCorrFull);

  out << "\n## Correlations, three highest quartiles of views (N = " << b.upper_quartile_n
      << ")\n\n";
  correlation_table(out, b.corr_upper_quartiles);
  notes_block(out, b, table::kCorrUpper);

  out << "\n## Bin frequency distributions\n";
  for (const auto& h : b.histograms) {
    out << "\n### " << h.title << "\n\n```\n"
        << render_histogram_plot(h.histogram, PlotStyle::text) << "```\n";
  }
  out << "\nBin edges are configurable approximations.\n";
  notes_block(out, b, table::kHistograms);

  out << "\n## Categories\n\n";
  out << md_row({"Category", "Frequency"}) << md_rule(1);
  for (const auto& c : b.categories) out << md_row({c.category, std::to_string(c.count)});
  notes_block(out, b, table::kCategories);
  return out.str();
}

std::string render_csv(const ReportBundle& b) {
  std::ostringstream out;
  csv_summary(out, table::kBasic, b.summary_basic);
  csv_summary(out, table::kMetrics, b.summary_metrics);
  csv_matrix(out, table::kCorrFull, b.corr_full);
  csv_matrix(out, table::kCorrUpper, b.corr_upper_quartiles);
  for (const auto& h : b.histograms) {
    const auto& hist = h.histogram;
    out << "# histogram_" << h.metric << "\n" << "bin,lower,upper,count\n";
    if (hist.underflow > 0) {
      out << csv_field("<" + fmt::full(hist.bins.edges.front())) << ",,"
          << fmt::full(hist.bins.edges.front()) << ',' << hist.underflow << "\n";
    }
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      out << csv_field(hist.bins.label(i)) << ',' << fmt::full(hist.bins.edges[i]) << ','
          << fmt::full(hist.bins.edges[i + 1]) << ',' << hist.counts[i] << "\n";
    }
    if (hist.overflow > 0) {
      out << csv_field(">" + fmt::full(hist.bins.edges.back())) << ','
          << fmt::full(hist.bins.edges.back()) << ",," << hist.overflow << "\n";
    }
    out << "\n";
  }
  out << "# " << table::kCategories << "\n" << "category,frequency\n";
  for (const auto& c : b.categories) out << csv_field(c.category) << ',' << c.count << "\n";
  return out.str();
}

}  // namespace engage
