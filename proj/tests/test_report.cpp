#include <gtest/gtest.h>

#include <json.hpp>
#include <regex>

#include "engage/errors.hpp"
#include "engage/format.hpp"
#include "engage/ingestion.hpp"
#include "engage/render.hpp"
#include "engage/report.hpp"
#include "test_support.hpp"

namespace engage {
namespace {

using testing::data_dir;
using testing::make_snapshot;
using testing::TempDir;
using testing::write_text;

StudySample fixture_sample() {
  FetchConfig config;
  config.request_interval = std::chrono::milliseconds{0};
  const auto candidates =
      sample_trending(config, fixture_transport_factory(data_dir() / "replication"), 3).sample;
  return select_study_sample(candidates, 100).sample;
}

const ReportBundle& fixture_bundle() {
  static const ReportBundle bundle = build_report(fixture_sample());
  return bundle;
}

bool has_note(const std::vector<std::string>& notes, const std::string& needle) {
  return std::any_of(notes.begin(), notes.end(),
                     [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

TEST(BuildReport, FixtureShapes) {
  const auto& b = fixture_bundle();
  EXPECT_EQ(b.sample.size(), 100u);
  EXPECT_EQ(b.upper_quartile_n, 75u);
  EXPECT_EQ(b.corr_full.size(), 8u);
  EXPECT_EQ(b.corr_full.names(), correlation_variables());
  EXPECT_EQ(b.corr_upper_quartiles.at(0, 3).n, 75u);
  EXPECT_EQ(b.corr_full.at(0, 3).n, 100u);
  ASSERT_EQ(b.summary_basic.size(), 3u);
  ASSERT_EQ(b.summary_metrics.size(), 3u);
  EXPECT_EQ(b.summary_metrics[0].variable, "CpkI");
  EXPECT_EQ(b.summary_metrics[2].summary.n, 100u);
  ASSERT_EQ(b.histograms.size(), 3u);
  for (const auto& h : b.histograms) {
    EXPECT_EQ(h.histogram.total() + h.histogram.underflow + h.histogram.overflow, 100u);
  }
  EXPECT_TRUE(b.annotations.empty());
}

TEST(BuildReport, MatricesSymmetric) {
  const auto& b = fixture_bundle();
  for (const auto* m : {&b.corr_full, &b.corr_upper_quartiles}) {
    for (std::size_t i = 0; i < m->size(); ++i) {
      for (std::size_t j = 0; j < m->size(); ++j) EXPECT_EQ(m->at(i, j), m->at(j, i));
    }
  }
}

TEST(BuildReport, SingleVideo) {
  const auto b = build_report(StudySample({make_snapshot("a", 1000, 10, 2, 5)}));
  EXPECT_EQ(b.summary_basic[0].summary.n, 1u);
  EXPECT_FALSE(b.summary_basic[0].summary.std_dev);
  ASSERT_TRUE(b.annotations.contains(table::kCorrFull));
  EXPECT_TRUE(has_note(b.annotations.at(table::kCorrFull), "insufficient n"));
  EXPECT_TRUE(has_note(b.annotations.at(table::kCorrUpper), "insufficient n"));
  EXPECT_NE(render_markdown(b).find("insufficient n"), std::string::npos);
}

TEST(BuildReport, AllDislikesAbsent) {
  std::vector<VideoStatsSnapshot> snaps;
  for (int i = 0; i < 12; ++i) {
    snaps.push_back(make_snapshot("v" + std::to_string(i), 1000 + 37 * i, 10 + i, std::nullopt,
                                  3 + (i * 7) % 5));
  }
  const auto b = build_report(StudySample(snaps));
  EXPECT_TRUE(has_note(b.provenance.coverage_notes, "dislike counts absent for 12 of 12"));
  ASSERT_TRUE(b.annotations.contains(table::kMetrics));
  EXPECT_TRUE(has_note(b.annotations.at(table::kMetrics), "VpkI defined for 0 of 12"));
  EXPECT_TRUE(has_note(b.annotations.at(table::kMetrics), "DisP defined for 0 of 12"));
  EXPECT_EQ(b.summary_metrics[0].summary.n, 12u);  // CpkI unaffected
  EXPECT_EQ(b.summary_metrics[1].summary.n, 0u);
  EXPECT_EQ(b.histograms[2].histogram.total(), 0u);
  EXPECT_FALSE(b.corr_full.at(0, 1).defined());
}

TEST(BuildReport, EmptySampleThrows) {
  EXPECT_THROW((void)build_report(StudySample{}), std::invalid_argument);
}

TEST(BuildReport, Deterministic) {
  EXPECT_EQ(build_report(fixture_sample()), fixture_bundle());
}

TEST(BundleJson, RoundTrip) {
  const auto& b = fixture_bundle();
  const auto text = bundle_to_json(b);
  EXPECT_EQ(bundle_from_json(text), b);
  EXPECT_EQ(bundle_to_json(bundle_from_json(text)), text);
  const auto single = build_report(StudySample({make_snapshot("a", 3, std::nullopt, 1)}));
  EXPECT_EQ(bundle_from_json(bundle_to_json(single)), single);
  EXPECT_THROW((void)bundle_from_json("{}"), ParseError);
  EXPECT_THROW((void)bundle_from_json("[1"), ParseError);
}

TEST(Bins, DefaultsAndOverrides) {
  const auto d = default_bins();
  EXPECT_EQ(d.cpki.edges, (std::vector<double>{0, .2, .6, 1, 2, 4, 8, 16}));
  EXPECT_EQ(d.vpki.edges, (std::vector<double>{0, 1, 2, 4, 8, 16, 32, 64}));
  EXPECT_EQ(d.disp.edges, (std::vector<double>{0, .04, .08, .16, .32, .64, 1}));
  TempDir dir;
  write_text(dir / "bins.json", R"({"disp": {"edges": [0, 0.5, 1]}})");
  const auto loaded = load_bins(dir / "bins.json");
  EXPECT_EQ(loaded.disp.edges, (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(loaded.cpki, d.cpki);
  write_text(dir / "bad.json", R"({"disp": {"edges": [1, 0]}})");
  EXPECT_THROW((void)load_bins(dir / "bad.json"), ConfigError);
  write_text(dir / "odd.json", R"({"views": {"edges": [0, 1]}})");
  EXPECT_THROW((void)load_bins(dir / "odd.json"), ConfigError);
  EXPECT_THROW((void)load_bins(dir / "missing.json"), ConfigError);
}

CorrelationCell cell(double r, double p, std::size_t n = 75) {
  return {CorrelationStatus::ok, r, p, n};
}

TEST(Render, SignificanceClassification) {
  EXPECT_EQ(classify_significance(0.0009), Significance::p001);
  EXPECT_EQ(classify_significance(0.001), Significance::p05);
  EXPECT_EQ(classify_significance(0.049), Significance::p05);
  EXPECT_EQ(classify_significance(0.05), Significance::none);
  EXPECT_EQ(classify_significance(0.054), Significance::none);
  EXPECT_EQ(classify_significance(std::nullopt), Significance::none);
  EXPECT_TRUE(is_moderate(0.41));
  EXPECT_TRUE(is_moderate(-0.5));
  EXPECT_FALSE(is_moderate(0.4));
}

TEST(Render, MarkdownCells) {
  EXPECT_EQ(markdown_cell(cell(0.723, 1e-9)), "**.723\\*\\***");
  EXPECT_EQ(markdown_cell(cell(0.194, 0.054)), ".194");
  EXPECT_EQ(markdown_cell(cell(-0.242, 0.036)), "-.242\\*");
  EXPECT_EQ(markdown_cell(cell(0.45, 0.2)), "**.450**");
  EXPECT_EQ(markdown_cell(CorrelationCell{}), "n/a");
}

TEST(Render, ByteIdenticalRepeats) {
  const auto& b = fixture_bundle();
  for (auto f : {ReportFormat::markdown, ReportFormat::csv, ReportFormat::json}) {
    EXPECT_EQ(render(b, f), render(b, f));
    EXPECT_EQ(render(b, f), render(bundle_from_json(bundle_to_json(b)), f));
  }
}

TEST(Render, CsvHasNoStarsAndSeparateColumns) {
  const auto csv = render_csv(fixture_bundle());
  EXPECT_EQ(csv.find('*'), std::string::npos);
  EXPECT_NE(csv.find("# " + std::string(table::kCorrUpper)), std::string::npos);
  EXPECT_NE(csv.find(",r,p"), std::string::npos);
}

TEST(Render, MarkdownNumbersAppearInJson) {
  const auto& b = fixture_bundle();
  const auto json_text = render_json(b);
  const auto doc = nlohmann::json::parse(json_text);
  // Every correlation printed in Markdown is the rounding of a JSON value.
  const auto md = render_markdown(b);
  const auto& cells = doc.at("correlation_upper_quartiles").at("cells");
  std::set<std::string> printable;
  for (const auto& row : cells) {
    for (const auto& c : row) {
      if (c.contains("r") && c.at("r").is_number()) {
        printable.insert(fmt::no_leading_zero(c.at("r").get<double>()));
      }
    }
  }
  const std::regex r_pattern(R"((-?\.\d{3}))");
  const auto section_start = md.find("N = 75");
  ASSERT_NE(section_start, std::string::npos);
  const auto section_end = md.find("\n\n", md.find("|", section_start));
  const std::string section = md.substr(section_start, section_end - section_start);
  std::size_t seen = 0;
  for (std::sregex_iterator it(section.begin(), section.end(), r_pattern), end; it != end; ++it) {
    EXPECT_TRUE(printable.contains((*it)[1].str())) << (*it)[1].str();
    ++seen;
  }
  EXPECT_GT(seen, 20u);
}

TEST(Plot, TextBarsUnscaledBelowLimit) {
  Histogram h{BinSpec{{0, 1, 2, 3}, {"a", "b", "c"}}, {10, 3, 1}, 0, 0};
  const auto text = render_histogram_plot(h, PlotStyle::text);
  EXPECT_NE(text.find("| " + std::string(10, '#') + "\n"), std::string::npos);
  EXPECT_NE(text.find("| ###\n"), std::string::npos);
  EXPECT_NE(text.find("| #\n"), std::string::npos);
  EXPECT_EQ(text.find(std::string(11, '#')), std::string::npos);
}

TEST(Plot, ScaledToMaxWidth) {
  Histogram h{BinSpec{{0, 1, 2}, {}}, {400, 1}, 0, 0};
  const auto text = render_histogram_plot(h, PlotStyle::text);
  EXPECT_NE(text.find(std::string(kMaxBarWidth, '#')), std::string::npos);
  EXPECT_EQ(text.find(std::string(kMaxBarWidth + 1, '#')), std::string::npos);
  EXPECT_NE(text.find("|   1 | #\n"), std::string::npos);  // non-zero stays visible
}

TEST(Plot, SingleBinIsLongestBar) {
  Histogram h{BinSpec{{0, 1}, {"only"}}, {7}, 0, 0};
  const auto text = render_histogram_plot(h, PlotStyle::text);
  EXPECT_NE(text.find("only | 7 | #######"), std::string::npos);
  Histogram big{BinSpec{{0, 1}, {"only"}}, {90}, 0, 0};
  EXPECT_NE(render_histogram_plot(big, PlotStyle::text).find(std::string(kMaxBarWidth, '#')),
            std::string::npos);
}

TEST(Plot, OverflowRow) {
  Histogram h{BinSpec{{0, 1, 2}, {}}, {3, 1}, 0, 2};
  const auto text = render_histogram_plot(h, PlotStyle::text);
  const auto last_line_start = text.rfind('\n', text.size() - 2);
  EXPECT_EQ(text.substr(last_line_start + 1, 1), ">");
  EXPECT_NE(text.find(">2  | 2 | ##\n"), std::string::npos);
  EXPECT_EQ(text.find("<0"), std::string::npos);
}

TEST(Plot, SvgDeterministicWithLabels) {
  const auto& h = fixture_bundle().histograms[0].histogram;
  const auto a = render_histogram_plot(h, PlotStyle::svg, "CpkI");
  EXPECT_EQ(a, render_histogram_plot(h, PlotStyle::svg, "CpkI"));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find(".6-1.0"), std::string::npos);
  EXPECT_THROW((void)render_histogram_plot(Histogram{}, PlotStyle::text), std::invalid_argument);
}

TEST(Format, Helpers) {
  EXPECT_EQ(fmt::grouped(std::int64_t{2456693}), "2,456,693");
  EXPECT_EQ(fmt::grouped(-1234567.891, 1), "-1,234,567.9");
  EXPECT_EQ(fmt::no_leading_zero(0.7234), ".723");
  EXPECT_EQ(fmt::no_leading_zero(-0.05), "-.050");
  EXPECT_EQ(fmt::percent(0.1044), "10.44%");
  EXPECT_EQ(fmt::full(0.1), "0.1");
}

}  // namespace
}  // namespace engage
