#include "engage/study_sample.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace engage {

StudySample::StudySample(std::vector<VideoStatsSnapshot> snapshots,
                         std::string selection_note)
    : snapshots_(std::move(snapshots)), selection_note_(std::move(selection_note)) {
  std::unordered_set<std::string> seen;
  seen.reserve(snapshots_.size());
  for (const auto& s : snapshots_) {
    if (!seen.insert(s.video_id).second) {
      throw std::invalid_argument("duplicate video_id in study sample: " +
                                  s.video_id);
    }
  }
}

StudySample StudySample::dedup_latest(std::span<const VideoStatsSnapshot> snapshots,
                                      std::string selection_note) {
  std::vector<VideoStatsSnapshot> out;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& s : snapshots) {
    auto [it, inserted] = index.try_emplace(s.video_id, out.size());
    if (inserted) {
      out.push_back(s);
    } else if (out[it->second].fetched_at <= s.fetched_at) {
      out[it->second] = s;
    }
  }
  StudySample sample;
  sample.snapshots_ = std::move(out);
  sample.selection_note_ = std::move(selection_note);
  return sample;
}

void StudySample::append_note(const std::string& note) {
  if (note.empty()) return;
  if (!selection_note_.empty()) selection_note_ += "; ";
  selection_note_ += note;
}

}  // namespace engage
