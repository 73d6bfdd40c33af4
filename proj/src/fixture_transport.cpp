#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "engage/errors.hpp"
#include "engage/transport.hpp"

namespace engage {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot read fixture page " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path page_path(const fs::path& dir, int sweep, std::size_t page) {
  return dir / ("sweep" + std::to_string(sweep) + "_page" + std::to_string(page) + ".json");
}

}  // namespace

std::optional<std::string> ApiRequest::param(const std::string& name) const {
  for (const auto& [key, value] : params) {
    if (key == name) return value;
  }
  return std::nullopt;
}

FixtureTransport::FixtureTransport(const fs::path& dir, int sweep) {
  for (std::size_t page = 1;; ++page) {
    const fs::path path = page_path(dir, sweep, page);
    if (!fs::exists(path)) break;
    pages_.push_back(read_file(path));
  }
  if (pages_.empty()) {
    throw ConfigError("fixture directory " + dir.string() + " has no page for sweep " +
                      std::to_string(sweep));
  }
  for (std::size_t i = 0; i + 1 < pages_.size(); ++i) {
    const auto doc = nlohmann::json::parse(pages_[i], nullptr, false);
    if (doc.is_object() && doc.contains("nextPageToken") &&
        doc["nextPageToken"].is_string()) {
      by_token_.emplace(doc["nextPageToken"].get<std::string>(), i + 1);
    }
  }
}

HttpResponse FixtureTransport::get(const ApiRequest& request) {
  ++requests_;
  const auto token = request.param("pageToken");
  if (!token) return {200, pages_.front()};
  const auto it = by_token_.find(*token);
  if (it == by_token_.end()) return {404, R"({"error":{"code":404,"message":"unknown page token"}})"};
  return {200, pages_[it->second]};
}

std::vector<int> list_fixture_sweeps(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw ConfigError("fixture directory not found: " + dir.string());
  }
  static const std::regex name(R"(sweep(\d+)_page1\.json)");
  std::set<int> sweeps;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string file = entry.path().filename().string();
    if (std::regex_match(file, m, name)) sweeps.insert(std::stoi(m[1].str()));
  }
  return {sweeps.begin(), sweeps.end()};
}

}  // namespace engage
