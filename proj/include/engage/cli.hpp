#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "engage/ingestion.hpp"

namespace engage::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kTransportError = 3,
  kStorageError = 4,
  kEmptySample = 5,
  kReplicationFailed = 6,
};

// External dependencies of the commands, replaceable in tests.
struct Services {
  TransportFactory live_transport;
  std::function<std::optional<std::string>(const std::string&)> getenv;
  Clock clock = now_utc;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::filesystem::path replication_fixture;
  std::filesystem::path sampled_ids_file;
};

// Live HTTPS transport, the process environment, std::cout/std::cerr, and
// the bundled replication data.
Services default_services();

inline constexpr const char* kApiKeyVariable = "ENGAGE_API_KEY";

struct FetchOptions {
  std::optional<std::filesystem::path> offline_dir;
  std::optional<std::filesystem::path> ids_file;  // live re-query of listed ids
  std::string region = "US";
  std::optional<int> occasions;  // default: every fixture sweep, or 1 live
  std::filesystem::path store = "snapshots.jsonl";
  int page_size = kMaxPageSize;
  int max_pages = 4;
  int request_interval_ms = 200;
};

struct AnalyzeOptions {
  std::filesystem::path store = "snapshots.jsonl";
  long long n = 100;
  std::filesystem::path out = "bundle.json";
  bool lenient = false;
};

struct ReportOptions {
  std::filesystem::path bundle = "bundle.json";
  std::vector<std::string> formats = {"md", "csv", "json", "txt"};
  std::optional<std::filesystem::path> bins;
  std::filesystem::path out_dir = ".";
};

struct ReplicateOptions {
  std::filesystem::path out_dir = "replication";
  std::optional<std::filesystem::path> fixture_dir;
};

int run_fetch(const FetchOptions& options, const Services& services);
int run_analyze(const AnalyzeOptions& options, const Services& services);
int run_report(const ReportOptions& options, const Services& services);
int run_replicate(const ReplicateOptions& options, const Services& services);

// Parses the command line (args[0] is the program name) and dispatches.
int run(const std::vector<std::string>& args, const Services& services);

}  // namespace engage::cli
