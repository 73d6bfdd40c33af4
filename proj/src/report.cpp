#include "engage/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "engage/errors.hpp"

namespace engage {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kMetricKeys[] = {"cpki", "vpki", "disp"};
constexpr const char* kMetricNames[] = {"CpkI", "VpkI", "DisP"};
constexpr const char* kMetricTitles[] = {
    "CpkI (comments per thousand views)",
    "VpkI (votes per thousand views)",
    "DisP (share of votes that are dislikes)",
};

const BinSpec& bins_for(const MetricBins& bins, int metric) {
  switch (metric) {
    case 0: return bins.cpki;
    case 1: return bins.vpki;
    default: return bins.disp;
  }
}

BinSpec& bins_for(MetricBins& bins, int metric) {
  return const_cast<BinSpec&>(bins_for(std::as_const(bins), metric));
}

std::optional<double> as_double(const std::optional<Count>& c) {
  if (!c) return std::nullopt;
  return static_cast<double>(*c);
}

struct Columns {
  OptionalValues views, likes, dislikes, comments, votes, cpki, vpki, disp;
};

Columns extract(const StudySample& sample, const std::vector<EngagementMetrics>& metrics) {
  Columns c;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& s = sample.snapshots()[i];
    c.views.push_back(static_cast<double>(s.views));
    c.likes.push_back(as_double(s.likes));
    c.dislikes.push_back(as_double(s.dislikes));
    c.comments.push_back(as_double(s.comments));
    c.votes.push_back(as_double(s.votes()));
    c.cpki.push_back(metrics[i].cpki_value());
    c.vpki.push_back(metrics[i].vpki_value());
    c.disp.push_back(metrics[i].disp_value());
  }
  return c;
}

std::vector<NamedColumn> correlation_columns(const Columns& c) {
  const auto& names = correlation_variables();
  return {
      {names[0], c.cpki},  {names[1], c.vpki},     {names[2], c.disp},
      {names[3], c.views}, {names[4], c.likes},    {names[5], c.dislikes},
      {names[6], c.comments}, {names[7], c.votes},
  };
}

void annotate_correlations(const CorrelationMatrix& m, std::size_t sample_n,
                           std::vector<std::string>& notes) {
  if (sample_n < 2) {
    notes.push_back("insufficient n: correlations need at least 2 videos (N = " +
                    std::to_string(sample_n) + ")");
    return;
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto& cell = m.at(i, j);
      if (cell.defined()) continue;
      const std::string what =
          i == j ? m.names()[i] : "r(" + m.names()[i] + ", " + m.names()[j] + ")";
      notes.push_back(what + " undefined: " + to_string(cell.status) + " (n = " +
                      std::to_string(cell.n) + ")");
    }
  }
  if (sample_n < 3) notes.push_back("p-values unavailable with fewer than 3 videos");
}

std::size_t count_present(const OptionalValues& v) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](const auto& x) { return x.has_value(); }));
}

// JSON helpers --------------------------------------------------------------

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json opt_count(const std::optional<Count>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json bins_json(const BinSpec& b) {
  return ordered_json{{"edges", b.edges}, {"labels", b.labels}};
}

ordered_json summary_json(const VariableSummary& v) {
  const auto& s = v.summary;
  ordered_json j;
  j["variable"] = v.variable;
  j["n"] = s.n;
  j["mean"] = opt(s.mean);
  j["std_dev"] = opt(s.std_dev);
  j["min"] = opt(s.min);
  j["max"] = opt(s.max);
  j["skewness"] = opt(s.skewness);
  j["kurtosis"] = opt(s.kurtosis);
  j["bin_mode"] = s.bin_mode ? ordered_json(*s.bin_mode) : ordered_json(nullptr);
  return j;
}

ordered_json matrix_json(const CorrelationMatrix& m) {
  ordered_json cells = ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.size(); ++j) {
      const auto& c = m.at(i, j);
      row.push_back(ordered_json{{"r", opt(c.r)},
                                 {"p_value", opt(c.p_value)},
                                 {"n", c.n},
                                 {"status", to_string(c.status)}});
    }
    cells.push_back(std::move(row));
  }
  return ordered_json{{"variables", m.names()}, {"cells", std::move(cells)}};
}

// Parsing helpers -------------------------------------------------------------

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw ParseError(field, "bundle field '" + field + "': " + what);
}

const json& member(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) bad(key, "missing");
  return j.at(key);
}

std::optional<double> read_opt(const json& j, const std::string& key) {
  const json& v = member(j, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) bad(key, "expected a number or null");
  return v.get<double>();
}

std::optional<Count> read_opt_count(const json& j, const std::string& key) {
  const json& v = member(j, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number_integer()) bad(key, "expected an integer or null");
  return v.get<Count>();
}

BinSpec read_bins(const json& j, const std::string& field) {
  BinSpec b;
  try {
    b.edges = member(j, "edges").get<std::vector<double>>();
    if (j.contains("labels")) b.labels = j.at("labels").get<std::vector<std::string>>();
    b.validate();
  } catch (const json::exception& e) {
    bad(field, e.what());
  } catch (const std::invalid_argument& e) {
    bad(field, e.what());
  }
  return b;
}

VariableSummary read_summary(const json& j) {
  VariableSummary v;
  v.variable = member(j, "variable").get<std::string>();
  auto& s = v.summary;
  s.n = member(j, "n").get<std::size_t>();
  s.mean = read_opt(j, "mean");
  s.std_dev = read_opt(j, "std_dev");
  s.min = read_opt(j, "min");
  s.max = read_opt(j, "max");
  s.skewness = read_opt(j, "skewness");
  s.kurtosis = read_opt(j, "kurtosis");
  const json& mode = member(j, "bin_mode");
  if (!mode.is_null()) s.bin_mode = mode.get<std::string>();
  return v;
}

CorrelationStatus read_status(const std::string& text) {
  for (auto s : {CorrelationStatus::ok, CorrelationStatus::insufficient_n,
                 CorrelationStatus::constant_series}) {
    if (to_string(s) == text) return s;
  }
  bad("status", "unknown correlation status '" + text + "'");
}

CorrelationMatrix read_matrix(const json& j) {
  CorrelationMatrix m(member(j, "variables").get<std::vector<std::string>>());
  const json& cells = member(j, "cells");
  if (!cells.is_array() || cells.size() != m.size()) bad("cells", "wrong row count");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!cells[i].is_array() || cells[i].size() != m.size()) {
      bad("cells", "wrong column count");
    }
    for (std::size_t k = 0; k < m.size(); ++k) {
      const json& c = cells[i][k];
      auto& cell = m.at(i, k);
      cell.r = read_opt(c, "r");
      cell.p_value = read_opt(c, "p_value");
      cell.n = member(c, "n").get<std::size_t>();
      cell.status = read_status(member(c, "status").get<std::string>());
    }
  }
  return m;
}

}  // namespace

MetricBins default_bins() {
  MetricBins b;
  b.cpki.edges = {0, 0.2, 0.6, 1, 2, 4, 8, 16};
  b.cpki.labels = {"0-.2", ".2-.6", ".6-1.0", "1.0-2.0", "2.0-4.0", "4.0-8.0", "8.0-16.0"};
  b.vpki.edges = {0, 1, 2, 4, 8, 16, 32, 64};
  b.vpki.labels = {"0-1.0",   "1.0-2.0",   "2.0-4.0",  "4.0-8.0",
                   "8.0-16.0", "16.0-32.0", "32.0-64.0"};
  b.disp.edges = {0, 0.04, 0.08, 0.16, 0.32, 0.64, 1};
  b.disp.labels = {"≤ 4%", "4-8%", "8-16%", "16-32%", "32-64%", "64-100%"};
  return b;
}

MetricBins load_bins(const std::filesystem::path& path, MetricBins base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read bins file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("bins file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("bins file must hold a JSON object");
  for (int m = 0; m < 3; ++m) {
    if (!doc.contains(kMetricKeys[m])) continue;
    try {
      bins_for(base, m) = read_bins(doc[kMetricKeys[m]], kMetricKeys[m]);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("bins file: ") + e.what());
    }
  }
  for (const auto& key : doc.items()) {
    if (key.key() != "cpki" && key.key() != "vpki" && key.key() != "disp") {
      throw ConfigError("bins file: unknown metric '" + key.key() + "'");
    }
  }
  return base;
}

const std::vector<std::string>& correlation_variables() {
  static const std::vector<std::string> names = {
      "CpkI", "VpkI", "DisP", "Views", "Votes+", "Votes-", "Comments", "Votes (sum)"};
  return names;
}

ReportBundle build_report(const StudySample& sample, const MetricBins& bins) {
  if (sample.empty()) throw std::invalid_argument("cannot build a report for an empty sample");
  for (int m = 0; m < 3; ++m) bins_for(bins, m).validate();

  ReportBundle b;
  b.sample = sample;
  b.bins = bins;
  b.metrics = compute_metrics_batch(sample.snapshots());
  const Columns cols = extract(sample, b.metrics);
  const std::size_t n = sample.size();

  b.summary_basic = {{"Views", summarize(cols.views)},
                     {"Comments", summarize(cols.comments)},
                     {"Votes", summarize(cols.votes)}};
  const OptionalValues* metric_cols[] = {&cols.cpki, &cols.vpki, &cols.disp};
  for (int m = 0; m < 3; ++m) {
    b.summary_metrics.push_back(
        {kMetricNames[m], summarize(*metric_cols[m], bins_for(bins, m))});
    b.histograms.push_back({kMetricKeys[m], kMetricTitles[m],
                            histogram(*metric_cols[m], bins_for(bins, m))});
  }

  b.corr_full = correlation_matrix(correlation_columns(cols));
  annotate_correlations(b.corr_full, n, b.annotations[table::kCorrFull]);

  const StudySample upper = quartile_filter(sample, views_key(), QuartileSet::top_three());
  b.upper_quartile_n = upper.size();
  const auto upper_metrics = compute_metrics_batch(upper.snapshots());
  b.corr_upper_quartiles = correlation_matrix(correlation_columns(extract(upper, upper_metrics)));
  annotate_correlations(b.corr_upper_quartiles, upper.size(),
                        b.annotations[table::kCorrUpper]);

  b.categories = category_counts(sample);

  // Coverage.
  auto& prov = b.provenance;
  prov.selection_note = sample.selection_note();
  const auto [first, last] = std::minmax_element(
      sample.snapshots().begin(), sample.snapshots().end(),
      [](const auto& x, const auto& y) { return x.fetched_at < y.fetched_at; });
  prov.first_fetch = format_rfc3339(first->fetched_at);
  prov.last_fetch = format_rfc3339(last->fetched_at);

  const auto coverage = [&](const char* what, const OptionalValues& v) {
    const std::size_t missing = n - count_present(v);
    if (missing > 0) {
      prov.coverage_notes.push_back(std::string(what) + " absent for " +
                                    std::to_string(missing) + " of " + std::to_string(n) +
                                    " videos");
    }
    return missing;
  };
  const std::size_t missing_dislikes = coverage("dislike counts", cols.dislikes);
  coverage("like counts", cols.likes);
  coverage("comment counts", cols.comments);
  if (missing_dislikes == n) {
    prov.coverage_notes.push_back(
        "dislike counts are no longer published by the platform; VpkI and DisP are "
        "undefined for live data");
  }
  const bool any_missing = std::any_of(
      metric_cols, metric_cols + 3, [&](const auto* c) { return count_present(*c) < n; });
  if (any_missing || count_present(cols.votes) < n || count_present(cols.comments) < n) {
    prov.coverage_notes.push_back(
        "correlations use pairwise deletion; each cell reports its own n");
  }

  for (int m = 0; m < 3; ++m) {
    const std::size_t defined = count_present(*metric_cols[m]);
    if (defined < n) {
      b.annotations[table::kMetrics].push_back(
          std::string(kMetricNames[m]) + " defined for " + std::to_string(defined) + " of " +
          std::to_string(n) + " videos");
      b.annotations[table::kHistograms].push_back(
          std::string(kMetricNames[m]) + " histogram covers " + std::to_string(defined) +
          " of " + std::to_string(n) + " videos");
    }
  }
  if (count_present(cols.votes) < n || count_present(cols.comments) < n) {
    b.annotations[table::kBasic].push_back(
        "Comments defined for " + std::to_string(count_present(cols.comments)) +
        ", Votes for " + std::to_string(count_present(cols.votes)) + " of " +
        std::to_string(n) + " videos");
  }
  std::erase_if(b.annotations, [](const auto& kv) { return kv.second.empty(); });
  return b;
}

std::string bundle_to_json(const ReportBundle& b) {
  ordered_json videos = ordered_json::array();
  for (std::size_t i = 0; i < b.sample.size(); ++i) {
    const auto& s = b.sample.snapshots()[i];
    const auto& m = b.metrics[i];
    videos.push_back(ordered_json{
        {"video_id", s.video_id},
        {"fetched_at", format_rfc3339(s.fetched_at)},
        {"views", s.views},
        {"likes", opt_count(s.likes)},
        {"dislikes", opt_count(s.dislikes)},
        {"comments", opt_count(s.comments)},
        {"comments_enabled", s.comments_enabled},
        {"category", s.category},
        {"cpki", opt(m.cpki_value())},
        {"vpki", opt(m.vpki_value())},
        {"disp", opt(m.disp_value())},
    });
  }

  ordered_json doc;
  doc["format"] = "engage-report-bundle/1";
  doc["sample"] = ordered_json{{"n", b.sample.size()},
                               {"selection_note", b.sample.selection_note()},
                               {"videos", std::move(videos)}};
  doc["bins"] = ordered_json{{"cpki", bins_json(b.bins.cpki)},
                             {"vpki", bins_json(b.bins.vpki)},
                             {"disp", bins_json(b.bins.disp)}};
  ordered_json basic = ordered_json::array();
  for (const auto& v : b.summary_basic) basic.push_back(summary_json(v));
  ordered_json metrics = ordered_json::array();
  for (const auto& v : b.summary_metrics) metrics.push_back(summary_json(v));
  doc["summary_basic"] = std::move(basic);
  doc["summary_metrics"] = std::move(metrics);
  doc["correlation_full"] = matrix_json(b.corr_full);
  doc["correlation_full"]["n"] = b.sample.size();
  doc["correlation_upper_quartiles"] = matrix_json(b.corr_upper_quartiles);
  doc["correlation_upper_quartiles"]["n"] = b.upper_quartile_n;

  ordered_json hists = ordered_json::array();
  for (const auto& h : b.histograms) {
    hists.push_back(ordered_json{{"metric", h.metric},
                                 {"title", h.title},
                                 {"edges", h.histogram.bins.edges},
                                 {"labels", h.histogram.bins.labels},
                                 {"counts", h.histogram.counts},
                                 {"underflow", h.histogram.underflow},
                                 {"overflow", h.histogram.overflow}});
  }
  doc["histograms"] = std::move(hists);

  ordered_json cats = ordered_json::array();
  for (const auto& c : b.categories) {
    cats.push_back(ordered_json{{"category", c.category}, {"count", c.count}});
  }
  doc["categories"] = std::move(cats);
  doc["provenance"] = ordered_json{{"selection_note", b.provenance.selection_note},
                                   {"first_fetch", b.provenance.first_fetch},
                                   {"last_fetch", b.provenance.last_fetch},
                                   {"coverage_notes", b.provenance.coverage_notes}};
  ordered_json notes = ordered_json::object();
  for (const auto& [key, list] : b.annotations) notes[key] = list;
  doc["annotations"] = std::move(notes);
  return doc.dump(2) + "\n";
}

ReportBundle bundle_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("bundle", std::string("bundle is not valid JSON: ") + e.what());
  }
  try {
    if (member(doc, "format") != "engage-report-bundle/1") {
      bad("format", "unsupported bundle format");
    }
    ReportBundle b;
    const json& sample = member(doc, "sample");
    std::vector<VideoStatsSnapshot> snapshots;
    for (const json& v : member(sample, "videos")) {
      VideoStatsSnapshot s;
      s.video_id = member(v, "video_id").get<std::string>();
      try {
        s.fetched_at = parse_rfc3339(member(v, "fetched_at").get<std::string>());
      } catch (const std::invalid_argument& e) {
        bad("fetched_at", e.what());
      }
      s.views = member(v, "views").get<Count>();
      s.likes = read_opt_count(v, "likes");
      s.dislikes = read_opt_count(v, "dislikes");
      s.comments = read_opt_count(v, "comments");
      s.comments_enabled = member(v, "comments_enabled").get<bool>();
      s.category = member(v, "category").get<std::string>();
      snapshots.push_back(std::move(s));
    }
    b.sample = StudySample(std::move(snapshots),
                           member(sample, "selection_note").get<std::string>());
    b.metrics = serial::compute_metrics_batch(b.sample.snapshots());

    const json& bins = member(doc, "bins");
    for (int m = 0; m < 3; ++m) {
      bins_for(b.bins, m) = read_bins(member(bins, kMetricKeys[m]), kMetricKeys[m]);
    }
    for (const json& v : member(doc, "summary_basic")) b.summary_basic.push_back(read_summary(v));
    for (const json& v : member(doc, "summary_metrics")) {
      b.summary_metrics.push_back(read_summary(v));
    }
    b.corr_full = read_matrix(member(doc, "correlation_full"));
    b.corr_upper_quartiles = read_matrix(member(doc, "correlation_upper_quartiles"));
    b.upper_quartile_n = member(member(doc, "correlation_upper_quartiles"), "n").get<std::size_t>();

    for (const json& h : member(doc, "histograms")) {
      MetricHistogram mh;
      mh.metric = member(h, "metric").get<std::string>();
      mh.title = member(h, "title").get<std::string>();
      mh.histogram.bins = read_bins(h, "histograms");
      mh.histogram.counts = member(h, "counts").get<std::vector<std::size_t>>();
      if (mh.histogram.counts.size() != mh.histogram.bins.bin_count()) {
        bad("counts", "histogram count length does not match its bins");
      }
      mh.histogram.underflow = member(h, "underflow").get<std::size_t>();
      mh.histogram.overflow = member(h, "overflow").get<std::size_t>();
      b.histograms.push_back(std::move(mh));
    }
    for (const json& c : member(doc, "categories")) {
      b.categories.push_back(
          {member(c, "category").get<std::string>(), member(c, "count").get<std::size_t>()});
    }
    const json& prov = member(doc, "provenance");
    b.provenance.selection_note = member(prov, "selection_note").get<std::string>();
    b.provenance.first_fetch = member(prov, "first_fetch").get<std::string>();
    b.provenance.last_fetch = member(prov, "last_fetch").get<std::string>();
    b.provenance.coverage_notes = member(prov, "coverage_notes").get<std::vector<std::string>>();
    for (const auto& [key, list] : member(doc, "annotations").items()) {
      b.annotations[key] = list.get<std::vector<std::string>>();
    }
    return b;
  } catch (const json::exception& e) {
    throw ParseError("bundle", std::string("malformed bundle: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError("bundle", std::string("malformed bundle: ") + e.what());
  }
}

}  // namespace engage
