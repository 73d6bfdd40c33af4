#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace engage {

struct ApiRequest {
  std::string path;
  std::vector<std::pair<std::string, std::string>> params;

  std::optional<std::string> param(const std::string& name) const;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Source of API responses: live HTTPS or recorded pages.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const ApiRequest& request) = 0;
};

// HTTPS client for the public video API. Error messages never include
// request parameters, so the API key does not leak into logs.
class HttpsTransport final : public Transport {
 public:
  explicit HttpsTransport(std::string host = "www.googleapis.com",
                          int timeout_seconds = 30);
  HttpResponse get(const ApiRequest& request) override;

 private:
  std::string host_;
  int timeout_seconds_;
};

// Replays recorded pages sweep<k>_page<j>.json for one sweep k. A request
// without pageToken serves page 1; a token serves the page that follows the
// page whose nextPageToken equals it. Unknown tokens yield a 404 response.
class FixtureTransport final : public Transport {
 public:
  FixtureTransport(const std::filesystem::path& dir, int sweep);
  HttpResponse get(const ApiRequest& request) override;

  std::size_t page_count() const { return pages_.size(); }
  std::size_t requests() const { return requests_; }

 private:
  std::vector<std::string> pages_;              // bodies, page 1 first
  std::map<std::string, std::size_t> by_token_; // token -> page index
  std::size_t requests_ = 0;
};

// Sweep indices with at least a page 1 in the fixture directory, ascending.
std::vector<int> list_fixture_sweeps(const std::filesystem::path& dir);

}  // namespace engage
