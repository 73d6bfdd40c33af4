#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "engage/snapshot.hpp"
#include "engage/study_sample.hpp"

namespace engage {

// One JSON object per line, fields in a fixed order. Unknown fields are
// ignored on read and never written.
std::string snapshot_to_json_line(const VideoStatsSnapshot& snapshot);
// Throws ParseError naming the offending field.
VideoStatsSnapshot snapshot_from_json_line(std::string_view line);

enum class ParseMode { strict, lenient };

struct LoadOptions {
  ParseMode mode = ParseMode::strict;
  std::function<bool(const VideoStatsSnapshot&)> filter;  // keep when true
};

struct LoadResult {
  StudySample sample;
  std::size_t records = 0;  // parsed lines, before filtering and dedup
  std::size_t skipped = 0;  // malformed lines skipped in lenient mode
  std::vector<std::string> warnings;
};

// Append-only snapshot file. Appends take an exclusive advisory lock, so
// concurrent writers serialise; readers need no lock.
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }

  // Returns the number of records written. Throws StorageError on I/O
  // failure. Writing nothing leaves the file untouched.
  std::size_t append(std::span<const VideoStatsSnapshot> snapshots) const;

  // Parses every line, applies the filter, and keeps the latest snapshot per
  // video_id. Strict mode throws ParseError with the line number; lenient
  // mode skips and counts malformed lines. Throws StorageError when the
  // file cannot be read.
  LoadResult load(const LoadOptions& options = {}) const;

 private:
  std::filesystem::path path_;
};

inline std::size_t store_snapshots(const SnapshotStore& store,
                                   std::span<const VideoStatsSnapshot> snapshots) {
  return store.append(snapshots);
}

inline LoadResult load_snapshots(const SnapshotStore& store,
                                 const LoadOptions& options = {}) {
  return store.load(options);
}

}  // namespace engage
