#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "engage/snapshot.hpp"

namespace engage {

// An ordered collection of snapshots, at most one per video_id.
class StudySample {
 public:
  StudySample() = default;

  // Throws std::invalid_argument if two snapshots share a video_id.
  explicit StudySample(std::vector<VideoStatsSnapshot> snapshots,
                       std::string selection_note = {});

  // Keeps one snapshot per video_id: the one with the latest fetched_at
  // (the later input wins on equal timestamps). Position follows the first
  // occurrence of each id.
  static StudySample dedup_latest(std::span<const VideoStatsSnapshot> snapshots,
                                  std::string selection_note = {});

  const std::vector<VideoStatsSnapshot>& snapshots() const { return snapshots_; }
  const std::string& selection_note() const { return selection_note_; }
  void set_selection_note(std::string note) { selection_note_ = std::move(note); }
  void append_note(const std::string& note);

  std::size_t size() const { return snapshots_.size(); }
  bool empty() const { return snapshots_.empty(); }

  friend bool operator==(const StudySample&, const StudySample&) = default;

 private:
  std::vector<VideoStatsSnapshot> snapshots_;
  std::string selection_note_;
};

}  // namespace engage
