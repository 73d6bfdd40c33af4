#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "engage/snapshot.hpp"
#include "engage/study_sample.hpp"
#include "engage/transport.hpp"

namespace engage {

inline constexpr int kMaxPageSize = 50;

struct FetchConfig {
  std::string api_key;  // only ever read from the environment
  std::string region_code = "US";
  int page_size = kMaxPageSize;
  int max_pages = 4;
  std::chrono::milliseconds request_interval{200};

  // Throws ConfigError when a field is out of range.
  void validate() const;
};

using Clock = std::function<Timestamp()>;

struct TrendingPage {
  std::vector<VideoStatsSnapshot> snapshots;
  std::optional<std::string> next_page_token;
  std::vector<std::string> warnings;
};

// Display label for a platform category id ("24" -> "Entertainment").
// Unknown ids map to "Category <id>".
std::string category_label(std::string_view category_id);

// The videos-listing request for the most-popular chart.
ApiRequest trending_request(const FetchConfig& config,
                            const std::optional<std::string>& page_token);

// Parses one videos-listing response body. Every snapshot is stamped with
// fetched_at, unless the page carries a recorded top-level "fetchedAt".
// Throws ParseError naming the offending field.
TrendingPage parse_trending_page(std::string_view body, Timestamp fetched_at);

// Requests and parses one page. Throws QuotaError when the API reports an
// exhausted quota, TransportError on any other non-2xx status.
TrendingPage fetch_trending_page(const FetchConfig& config, Transport& transport,
                                 const std::optional<std::string>& page_token,
                                 const Clock& clock = now_utc);

// One pass over the chart: follows page tokens until exhausted or
// config.max_pages is reached, pausing request_interval between requests.
struct Sweep {
  int occasion = 0;
  std::size_t pages = 0;
  std::vector<VideoStatsSnapshot> snapshots;
  std::vector<std::string> warnings;
};

Sweep fetch_sweep(const FetchConfig& config, Transport& transport, int occasion,
                  const Clock& clock = now_utc);

// Re-queries specific videos by id, up to page_size ids per request.
// Ids the API no longer returns are listed in `missing`.
struct IdFetch {
  std::vector<VideoStatsSnapshot> snapshots;
  std::vector<std::string> missing;
  std::size_t requests = 0;
  std::vector<std::string> warnings;
};

ApiRequest video_ids_request(const FetchConfig& config, std::span<const std::string> ids);
IdFetch fetch_by_ids(const FetchConfig& config, Transport& transport,
                     std::span<const std::string> ids, const Clock& clock = now_utc);

// One id per line; blank lines and lines starting with '#' are skipped.
// Throws ConfigError when the file cannot be read.
std::vector<std::string> read_id_list(const std::filesystem::path& path);

// Supplies the transport for a given occasion (1-based).
using TransportFactory = std::function<std::unique_ptr<Transport>(int occasion)>;

TransportFactory fixture_transport_factory(const std::filesystem::path& dir);

struct SamplingResult {
  StudySample sample;                        // deduplicated, latest wins
  std::vector<VideoStatsSnapshot> fetched;   // raw snapshots of this run
  std::size_t pages = 0;
  std::vector<std::string> warnings;
};

// Runs `occasions` sweeps and unions them with `previous` snapshots,
// keeping the latest snapshot per video. Throws EmptySampleError when the
// union is empty.
SamplingResult sample_trending(const FetchConfig& config,
                               const TransportFactory& transports, int occasions,
                               std::span<const VideoStatsSnapshot> previous = {},
                               const Clock& clock = now_utc);

struct Selection {
  StudySample sample;
  std::size_t requested = 0;
  std::size_t eligible = 0;

  bool shortfall() const { return eligible < requested; }
};

// Keeps comment-enabled videos, orders by views descending (ties by
// video_id ascending) and truncates to n. Throws std::invalid_argument for
// n == 0.
Selection select_study_sample(const StudySample& candidates, std::size_t n);

}  // namespace engage
