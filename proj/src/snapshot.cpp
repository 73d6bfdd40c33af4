#include "engage/snapshot.hpp"

namespace engage {

std::vector<std::string> normalize(VideoStatsSnapshot& snapshot) {
  std::vector<std::string> warnings;
  if (!snapshot.comments_enabled && snapshot.comments && *snapshot.comments > 0) {
    warnings.push_back("video " + snapshot.video_id + ": " +
                       std::to_string(*snapshot.comments) +
                       " comments reported with commenting disabled; "
                       "comment count dropped");
    snapshot.comments.reset();
  }
  return warnings;
}

std::vector<std::string> check_invariants(const VideoStatsSnapshot& snapshot) {
  std::vector<std::string> problems;
  const auto negative = [&](const char* field, Count value) {
    if (value < 0) {
      problems.push_back("video " + snapshot.video_id + ": negative " + field +
                         " (" + std::to_string(value) + ")");
    }
  };
  negative("views", snapshot.views);
  if (snapshot.likes) negative("likes", *snapshot.likes);
  if (snapshot.dislikes) negative("dislikes", *snapshot.dislikes);
  if (snapshot.comments) negative("comments", *snapshot.comments);
  if (!snapshot.comments_enabled && snapshot.comments && *snapshot.comments > 0) {
    problems.push_back("video " + snapshot.video_id +
                       ": comments present with commenting disabled");
  }
  if (snapshot.video_id.empty()) problems.push_back("empty video_id");
  return problems;
}

}  // namespace engage
