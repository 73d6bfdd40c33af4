#include "engage/snapshot_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "engage/errors.hpp"

namespace engage {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::optional<Count> optional_count(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() ||
      (it->is_number_unsigned() &&
       it->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))) {
    throw ParseError(key, std::string("field '") + key + "' must be an integer or null");
  }
  return it->get<Count>();
}

const json& required(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(key, std::string("missing field '") + key + "'");
  return *it;
}

// Closes the descriptor and releases its lock on scope exit.
class LockedFile {
 public:
  explicit LockedFile(const std::filesystem::path& path)
      : fd_(::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644)) {
    if (fd_ < 0) fail("cannot open", path);
    if (::flock(fd_, LOCK_EX) != 0) fail("cannot lock", path);
  }
  ~LockedFile() {
    if (fd_ >= 0) ::close(fd_);
  }
  LockedFile(const LockedFile&) = delete;
  LockedFile& operator=(const LockedFile&) = delete;

  void write_all(std::string_view data, const std::filesystem::path& path) {
    while (!data.empty()) {
      const ssize_t n = ::write(fd_, data.data(), data.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        fail("cannot write", path);
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
  }

 private:
  [[noreturn]] static void fail(const char* what, const std::filesystem::path& path) {
    throw StorageError(std::string(what) + " snapshot store " + path.string() + ": " +
                       std::strerror(errno));
  }
  int fd_;
};

}  // namespace

std::string snapshot_to_json_line(const VideoStatsSnapshot& s) {
  const auto count_or_null = [](const std::optional<Count>& c) -> ordered_json {
    return c ? ordered_json(*c) : ordered_json(nullptr);
  };
  ordered_json doc;
  doc["video_id"] = s.video_id;
  doc["fetched_at"] = format_rfc3339(s.fetched_at);
  doc["views"] = s.views;
  doc["likes"] = count_or_null(s.likes);
  doc["dislikes"] = count_or_null(s.dislikes);
  doc["comments"] = count_or_null(s.comments);
  doc["comments_enabled"] = s.comments_enabled;
  doc["category"] = s.category;
  return doc.dump();
}

VideoStatsSnapshot snapshot_from_json_line(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError("record", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("record", "record is not a JSON object");

  VideoStatsSnapshot s;
  const json& id = required(doc, "video_id");
  if (!id.is_string()) throw ParseError("video_id", "field 'video_id' must be a string");
  s.video_id = id.get<std::string>();

  const json& at = required(doc, "fetched_at");
  if (!at.is_string()) throw ParseError("fetched_at", "field 'fetched_at' must be a string");
  try {
    s.fetched_at = parse_rfc3339(at.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError("fetched_at", e.what());
  }

  required(doc, "views");
  const auto views = optional_count(doc, "views");
  if (!views) throw ParseError("views", "field 'views' must be an integer");
  s.views = *views;
  s.likes = optional_count(doc, "likes");
  s.dislikes = optional_count(doc, "dislikes");
  s.comments = optional_count(doc, "comments");

  const json& enabled = required(doc, "comments_enabled");
  if (!enabled.is_boolean()) {
    throw ParseError("comments_enabled", "field 'comments_enabled' must be a boolean");
  }
  s.comments_enabled = enabled.get<bool>();

  const json& category = required(doc, "category");
  if (!category.is_string()) throw ParseError("category", "field 'category' must be a string");
  s.category = category.get<std::string>();
  return s;
}

std::size_t SnapshotStore::append(std::span<const VideoStatsSnapshot> snapshots) const {
  if (snapshots.empty()) return 0;
  std::string buffer;
  for (const auto& s : snapshots) {
    buffer += snapshot_to_json_line(s);
    buffer += '\n';
  }
  LockedFile file(path_);
  file.write_all(buffer, path_);
  return snapshots.size();
}

LoadResult SnapshotStore::load(const LoadOptions& options) const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw StorageError("cannot read snapshot store " + path_.string());

  LoadResult result;
  std::vector<VideoStatsSnapshot> kept;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    VideoStatsSnapshot s;
    try {
      s = snapshot_from_json_line(line);
    } catch (const ParseError& e) {
      if (options.mode == ParseMode::strict) throw ParseError(e.field(), e.what(), line_no);
      ++result.skipped;
      result.warnings.push_back("line " + std::to_string(line_no) + ": " + e.what() +
                                " (skipped)");
      continue;
    }
    ++result.records;
    for (auto& w : normalize(s)) result.warnings.push_back(std::move(w));
    if (!options.filter || options.filter(s)) kept.push_back(std::move(s));
  }
  if (in.bad()) throw StorageError("error reading snapshot store " + path_.string());
  result.sample = StudySample::dedup_latest(
      kept, path_.filename().string() + ": " + std::to_string(result.records) +
                " record(s)");
  return result;
}

}  // namespace engage
