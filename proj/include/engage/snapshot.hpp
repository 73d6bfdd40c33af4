#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "engage/timestamp.hpp"

namespace engage {

// Counts are signed so that corrupt upstream data stays representable and
// can be reported by check_invariants() instead of silently wrapping.
using Count = std::int64_t;

// One video's public counters at a fetch instant.
struct VideoStatsSnapshot {
  std::string video_id;
  Timestamp fetched_at{};
  Count views = 0;
  std::optional<Count> likes;
  std::optional<Count> dislikes;
  std::optional<Count> comments;
  bool comments_enabled = true;
  std::string category;

  // Both vote counts known.
  std::optional<Count> votes() const {
    if (!likes || !dislikes) return std::nullopt;
    return *likes + *dislikes;
  }

  friend bool operator==(const VideoStatsSnapshot&,
                         const VideoStatsSnapshot&) = default;
};

// Applies the comment policy: a positive comment count on a video with
// commenting disabled is dropped. Returns one warning per change made.
std::vector<std::string> normalize(VideoStatsSnapshot& snapshot);

// Lists violated invariants (negative counts, comments on a disabled video).
// Empty when the snapshot is well-formed.
std::vector<std::string> check_invariants(const VideoStatsSnapshot& snapshot);

}  // namespace engage
