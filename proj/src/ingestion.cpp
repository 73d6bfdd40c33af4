#include "engage/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include <json.hpp>

#include "engage/errors.hpp"

namespace engage {

using nlohmann::json;

namespace {

const std::map<std::string, std::string, std::less<>>& category_names() {
  static const std::map<std::string, std::string, std::less<>> names = {
      {"1", "Film"},        {"2", "Autos"},     {"10", "Music"},
      {"15", "Animals"},    {"17", "Sports"},   {"18", "Shorts"},
      {"19", "Travel"},     {"20", "Games"},    {"21", "Videoblogging"},
      {"22", "People"},     {"23", "Comedy"},   {"24", "Entertainment"},
      {"25", "News"},       {"26", "Howto"},    {"27", "Education"},
      {"28", "Tech"},       {"29", "Nonprofit"}, {"30", "Movies"},
      {"43", "Shows"},      {"44", "Trailers"},
  };
  return names;
}

// Counts arrive as decimal strings; plain JSON integers are accepted too.
std::optional<Count> read_count(const json& parent, const char* key,
                                const std::string& where, const char* meaning,
                                bool required) {
  const auto it = parent.find(key);
  if (it == parent.end() || it->is_null()) {
    if (required) {
      throw ParseError(meaning, where + "." + key + " (" + meaning + ") is missing");
    }
    return std::nullopt;
  }
  const auto bad = [&] {
    return ParseError(meaning, where + "." + key + " (" + meaning +
                                   "): expected an integer count, got " + it->dump());
  };
  if (it->is_number_integer()) {
    if (it->is_number_unsigned() && it->get<std::uint64_t>() >
                                        static_cast<std::uint64_t>(INT64_MAX)) {
      throw bad();
    }
    return it->get<Count>();
  }
  if (!it->is_string()) throw bad();
  const auto& text = it->get_ref<const std::string&>();
  Count value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) throw bad();
  return value;
}

}  // namespace

void FetchConfig::validate() const {
  if (page_size < 1 || page_size > kMaxPageSize) {
    throw ConfigError("page size must be in [1, 50], got " + std::to_string(page_size));
  }
  if (max_pages < 1) throw ConfigError("max pages must be at least 1");
  if (request_interval.count() < 0) throw ConfigError("request interval must be >= 0");
  if (region_code.size() != 2 ||
      !std::all_of(region_code.begin(), region_code.end(),
                   [](char c) { return c >= 'A' && c <= 'Z'; })) {
    throw ConfigError("region code must be two upper-case letters, got '" +
                      region_code + "'");
  }
}

std::string category_label(std::string_view category_id) {
  const auto& names = category_names();
  const auto it = names.find(category_id);
  if (it != names.end()) return it->second;
  return "Category " + std::string(category_id);
}

ApiRequest trending_request(const FetchConfig& config,
                            const std::optional<std::string>& page_token) {
  ApiRequest request;
  request.path = "/youtube/v3/videos";
  request.params = {
      {"chart", "mostPopular"},
      {"part", "statistics,snippet"},
      {"maxResults", std::to_string(config.page_size)},
      {"regionCode", config.region_code},
  };
  if (page_token) request.params.emplace_back("pageToken", *page_token);
  if (!config.api_key.empty()) request.params.emplace_back("key", config.api_key);
  return request;
}

TrendingPage parse_trending_page(std::string_view body, Timestamp fetched_at) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError("body", std::string("response is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("body", "response is not a JSON object");

  if (const auto it = doc.find("fetchedAt"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("fetchedAt", "fetchedAt must be a string");
    try {
      fetched_at = parse_rfc3339(it->get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError("fetchedAt", e.what());
    }
  }

  TrendingPage page;
  if (const auto it = doc.find("nextPageToken"); it != doc.end() && it->is_string()) {
    page.next_page_token = it->get<std::string>();
  }
  const auto items = doc.find("items");
  if (items == doc.end() || !items->is_array()) {
    throw ParseError("items", "response has no items array");
  }

  for (std::size_t i = 0; i < items->size(); ++i) {
    const json& item = (*items)[i];
    const std::string where = "items[" + std::to_string(i) + "]";
    if (!item.is_object()) throw ParseError("items", where + " is not an object");
    const auto id = item.find("id");
    if (id == item.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
      throw ParseError("id", where + ".id is missing or not a string");
    }
    const auto stats = item.find("statistics");
    if (stats == item.end() || !stats->is_object()) {
      throw ParseError("statistics", where + ".statistics is missing");
    }
    const std::string stats_where = where + ".statistics";

    VideoStatsSnapshot s;
    s.video_id = id->get<std::string>();
    s.fetched_at = fetched_at;
    s.views = *read_count(*stats, "viewCount", stats_where, "views", true);
    s.likes = read_count(*stats, "likeCount", stats_where, "likes", false);
    s.dislikes = read_count(*stats, "dislikeCount", stats_where, "dislikes", false);
    s.comments = read_count(*stats, "commentCount", stats_where, "comments", false);
    // The listing has no explicit flag; a withheld comment count means
    // commenting is disabled.
    s.comments_enabled = s.comments.has_value();

    s.category = "Unknown";
    if (const auto snippet = item.find("snippet");
        snippet != item.end() && snippet->is_object()) {
      const auto cat = snippet->find("categoryId");
      if (cat != snippet->end() && cat->is_string()) {
        s.category = category_label(cat->get<std::string>());
      }
    }
    for (auto& w : normalize(s)) page.warnings.push_back(std::move(w));
    page.snapshots.push_back(std::move(s));
  }
  return page;
}

namespace {

HttpResponse checked(HttpResponse response) {
  if (response.status >= 200 && response.status < 300) return response;
  std::string reason;
  const auto doc = json::parse(response.body, nullptr, false);
  if (doc.is_object() && doc.contains("error") && doc["error"].is_object()) {
    const auto& err = doc["error"];
    if (err.contains("errors") && err["errors"].is_array() && !err["errors"].empty() &&
        err["errors"][0].is_object() && err["errors"][0].contains("reason") &&
        err["errors"][0]["reason"].is_string()) {
      reason = err["errors"][0]["reason"].get<std::string>();
    }
  }
  const std::string message = "video listing request failed with HTTP " +
                              std::to_string(response.status) +
                              (reason.empty() ? "" : " (" + reason + ")");
  if (response.status == 429 || reason == "quotaExceeded" ||
      reason == "rateLimitExceeded" || reason == "dailyLimitExceeded" ||
      reason == "userRateLimitExceeded") {
    throw QuotaError(response.status, message);
  }
  throw TransportError(response.status, message);
}

}  // namespace

TrendingPage fetch_trending_page(const FetchConfig& config, Transport& transport,
                                 const std::optional<std::string>& page_token,
                                 const Clock& clock) {
  const HttpResponse response = checked(transport.get(trending_request(config, page_token)));
  TrendingPage page = parse_trending_page(response.body, clock());
  if (page.snapshots.size() > static_cast<std::size_t>(config.page_size)) {
    page.snapshots.resize(static_cast<std::size_t>(config.page_size));
  }
  return page;
}

Sweep fetch_sweep(const FetchConfig& config, Transport& transport, int occasion,
                  const Clock& clock) {
  config.validate();
  Sweep sweep;
  sweep.occasion = occasion;
  std::optional<std::string> token;
  for (int page = 0; page < config.max_pages; ++page) {
    if (page > 0 && config.request_interval.count() > 0) {
      std::this_thread::sleep_for(config.request_interval);
    }
    TrendingPage result = fetch_trending_page(config, transport, token, clock);
    ++sweep.pages;
    for (auto& s : result.snapshots) sweep.snapshots.push_back(std::move(s));
    for (auto& w : result.warnings) sweep.warnings.push_back(std::move(w));
    token = std::move(result.next_page_token);
    if (!token) break;
  }
  return sweep;
}

ApiRequest video_ids_request(const FetchConfig& config, std::span<const std::string> ids) {
  std::string joined;
  for (std::size_t i = 0; i < ids.size(); ++i) joined += (i ? "," : "") + ids[i];
  ApiRequest request;
  request.path = "/youtube/v3/videos";
  request.params = {{"part", "statistics,snippet"}, {"id", joined}};
  if (!config.api_key.empty()) request.params.emplace_back("key", config.api_key);
  return request;
}

IdFetch fetch_by_ids(const FetchConfig& config, Transport& transport,
                     std::span<const std::string> ids, const Clock& clock) {
  config.validate();
  IdFetch result;
  const auto batch = static_cast<std::size_t>(config.page_size);
  for (std::size_t start = 0; start < ids.size(); start += batch) {
    if (start > 0 && config.request_interval.count() > 0) {
      std::this_thread::sleep_for(config.request_interval);
    }
    const auto chunk = ids.subspan(start, std::min(batch, ids.size() - start));
    const HttpResponse response = checked(transport.get(video_ids_request(config, chunk)));
    ++result.requests;
    TrendingPage page = parse_trending_page(response.body, clock());
    std::set<std::string> returned;
    for (auto& s : page.snapshots) {
      returned.insert(s.video_id);
      result.snapshots.push_back(std::move(s));
    }
    for (const auto& id : chunk) {
      if (!returned.contains(id)) result.missing.push_back(id);
    }
    for (auto& w : page.warnings) result.warnings.push_back(std::move(w));
  }
  return result;
}

std::vector<std::string> read_id_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read id list " + path.string());
  std::vector<std::string> ids;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(first, last - first + 1));
  }
  return ids;
}

TransportFactory fixture_transport_factory(const std::filesystem::path& dir) {
  return [dir](int occasion) -> std::unique_ptr<Transport> {
    return std::make_unique<FixtureTransport>(dir, occasion);
  };
}

SamplingResult sample_trending(const FetchConfig& config,
                               const TransportFactory& transports, int occasions,
                               std::span<const VideoStatsSnapshot> previous,
                               const Clock& clock) {
  if (occasions < 1) throw ConfigError("occasions must be at least 1");
  SamplingResult result;
  std::vector<std::string> stamps;
  for (int k = 1; k <= occasions; ++k) {
    const auto transport = transports(k);
    Sweep sweep = fetch_sweep(config, *transport, k, clock);
    result.pages += sweep.pages;
    if (!sweep.snapshots.empty()) {
      stamps.push_back(format_rfc3339(sweep.snapshots.front().fetched_at));
    }
    for (auto& s : sweep.snapshots) result.fetched.push_back(std::move(s));
    for (auto& w : sweep.warnings) result.warnings.push_back(std::move(w));
  }

  std::vector<VideoStatsSnapshot> all(previous.begin(), previous.end());
  all.insert(all.end(), result.fetched.begin(), result.fetched.end());
  if (all.empty()) throw EmptySampleError("sampling produced no snapshots");

  std::string note = std::to_string(occasions) + " sweep(s)";
  if (!stamps.empty()) {
    note += " at ";
    for (std::size_t i = 0; i < stamps.size(); ++i) note += (i ? ", " : "") + stamps[i];
  }
  if (!previous.empty()) {
    note += " plus " + std::to_string(previous.size()) + " stored snapshot(s)";
  }
  result.sample = StudySample::dedup_latest(all, note);
  result.sample.append_note(std::to_string(result.sample.size()) + " unique ids");
  return result;
}

Selection select_study_sample(const StudySample& candidates, std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample size must be at least 1");
  std::vector<VideoStatsSnapshot> eligible;
  for (const auto& s : candidates.snapshots()) {
    if (s.comments_enabled) eligible.push_back(s);
  }
  std::sort(eligible.begin(), eligible.end(),
            [](const VideoStatsSnapshot& a, const VideoStatsSnapshot& b) {
              if (a.views != b.views) return a.views > b.views;
              return a.video_id < b.video_id;
            });
  Selection selection;
  selection.requested = n;
  selection.eligible = eligible.size();
  if (eligible.size() > n) eligible.resize(n);
  selection.sample = StudySample(std::move(eligible), candidates.selection_note());
  selection.sample.append_note(
      "top " + std::to_string(selection.sample.size()) + " by views of " +
      std::to_string(selection.eligible) + " comment-enabled of " +
      std::to_string(candidates.size()) + " candidates" +
      (selection.shortfall() ? " (shortfall: " + std::to_string(n) + " requested)" : ""));
  return selection;
}

}  // namespace engage
