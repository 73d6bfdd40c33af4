#include "engage/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "engage/errors.hpp"
#include "engage/format.hpp"
#include "engage/render.hpp"
#include "engage/report.hpp"
#include "engage/snapshot_store.hpp"

namespace engage::cli {

namespace fs = std::filesystem;

namespace {

#ifndef ENGAGE_DATA_DIR
#define ENGAGE_DATA_DIR "data"
#endif

constexpr const char* kStructuralNote =
    "Replication is structural: it checks sample sizes, the quartile split, the "
    "category table and metric bounds on a bundled synthetic fixture. The original "
    "per-video data was never published and live statistics have drifted, so the "
    "published table values are not reproduced.";

// Category frequencies of the published case-study sample.
const std::vector<CategoryCount>& published_categories() {
  static const std::vector<CategoryCount> table = {
      {"Entertainment", 24}, {"Tech", 15}, {"Sports", 11}, {"Comedy", 9},
      {"Education", 9},      {"News", 8},  {"Film", 7},    {"Animals", 4},
      {"Music", 4},          {"People", 4}, {"Nonprofit", 3}, {"Howto", 1},
      {"Travel", 1},
  };
  return table;
}

constexpr std::size_t kPublishedUniqueIds = 106;
constexpr std::size_t kPublishedSampleSize = 100;
constexpr std::size_t kPublishedUpperQuartileN = 75;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw StorageError("error writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_warnings(const Services& s, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) *s.err << "warning: " << w << "\n";
}

}  // namespace

Services default_services() {
  Services s;
  s.live_transport = [](int) -> std::unique_ptr<Transport> {
    return std::make_unique<HttpsTransport>();
  };
  s.getenv = [](const std::string& name) -> std::optional<std::string> {
    const char* value = std::getenv(name.c_str());
    if (value == nullptr || *value == '\0') return std::nullopt;
    return std::string(value);
  };
  s.out = &std::cout;
  s.err = &std::cerr;
  s.replication_fixture = fs::path(ENGAGE_DATA_DIR) / "replication";
  s.sampled_ids_file = fs::path(ENGAGE_DATA_DIR) / "sampled_video_ids.txt";
  return s;
}

int run_fetch(const FetchOptions& options, const Services& services) {
  auto& err = *services.err;
  try {
    FetchConfig config;
    config.region_code = options.region;
    config.page_size = options.page_size;
    config.max_pages = options.max_pages;
    config.request_interval = std::chrono::milliseconds(options.request_interval_ms);

    TransportFactory transports;
    int occasions = options.occasions.value_or(1);
    if (options.ids_file && options.offline_dir) {
      throw ConfigError("--ids re-queries the live API and cannot be combined with --offline");
    }
    if (options.offline_dir) {
      const auto sweeps = list_fixture_sweeps(*options.offline_dir);
      if (sweeps.empty()) {
        throw ConfigError("no sweep<k>_page1.json files in " + options.offline_dir->string());
      }
      occasions = options.occasions.value_or(static_cast<int>(sweeps.size()));
      config.request_interval = std::chrono::milliseconds(0);
      transports = fixture_transport_factory(*options.offline_dir);
    } else {
      const auto key = services.getenv(kApiKeyVariable);
      if (!key) {
        throw ConfigError(std::string("live mode needs the API key in the ") +
                          kApiKeyVariable + " environment variable (or use --offline DIR)");
      }
      config.api_key = *key;
      transports = services.live_transport;
    }
    config.validate();
    if (occasions < 1) throw ConfigError("--occasions must be at least 1");

    const SnapshotStore store(options.store);
    std::vector<VideoStatsSnapshot> previous;
    if (fs::exists(options.store)) {
      const LoadResult loaded = store.load();
      previous = loaded.sample.snapshots();
    }

    if (options.ids_file) {
      const auto ids = read_id_list(*options.ids_file);
      if (ids.empty()) throw ConfigError("no ids in " + options.ids_file->string());
      const auto transport = transports(1);
      const IdFetch result = fetch_by_ids(config, *transport, ids, services.clock);
      print_warnings(services, result.warnings);
      for (const auto& id : result.missing) {
        *services.err << "warning: video " << id << " is no longer available\n";
      }
      if (result.snapshots.empty() && previous.empty()) {
        throw EmptySampleError("none of the listed videos is available");
      }
      store.append(result.snapshots);
      previous.insert(previous.end(), result.snapshots.begin(), result.snapshots.end());
      *services.out << "fetched " << result.requests << " pages, " << result.snapshots.size()
                    << " snapshots, " << StudySample::dedup_latest(previous).size()
                    << " unique ids\n";
      return kOk;
    }

    const SamplingResult result =
        sample_trending(config, transports, occasions, previous, services.clock);
    print_warnings(services, result.warnings);
    store.append(result.fetched);
    *services.out << "fetched " << result.pages << " pages, " << result.fetched.size()
                  << " snapshots, " << result.sample.size() << " unique ids\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const TransportError& e) {
    err << "error: " << e.what() << "\n";
    return kTransportError;
  } catch (const StorageError& e) {
    err << "error: " << e.what() << "\n";
    return kStorageError;
  } catch (const ParseError& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return e.line() > 0 ? kStorageError : kTransportError;
  } catch (const EmptySampleError& e) {
    err << "error: " << e.what() << "\n";
    return kEmptySample;
  }
}

int run_analyze(const AnalyzeOptions& options, const Services& services) {
  auto& err = *services.err;
  try {
    if (options.n < 1) throw ConfigError("--n must be at least 1");
    if (!fs::exists(options.store)) {
      throw StorageError("snapshot store not found: " + options.store.string());
    }
    LoadOptions load_options;
    load_options.mode = options.lenient ? ParseMode::lenient : ParseMode::strict;
    const LoadResult loaded = SnapshotStore(options.store).load(load_options);
    print_warnings(services, loaded.warnings);

    const Selection selection =
        select_study_sample(loaded.sample, static_cast<std::size_t>(options.n));
    if (selection.sample.empty()) {
      err << "error: no comment-enabled videos in " << options.store.string() << "\n";
      return kEmptySample;
    }
    if (selection.shortfall()) {
      err << "warning: only " << selection.eligible << " eligible videos, " << options.n
          << " requested\n";
    }
    const ReportBundle bundle = build_report(selection.sample);
    for (const auto& note : bundle.provenance.coverage_notes) {
      err << "warning: " << note << "\n";
    }
    write_file(options.out, bundle_to_json(bundle));
    *services.out << "analyzed " << bundle.sample.size() << " videos (upper quartiles: "
                  << bundle.upper_quartile_n << "), bundle written to "
                  << options.out.string() << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const StorageError& e) {
    err << "error: " << e.what() << "\n";
    return kStorageError;
  } catch (const ParseError& e) {
    err << "error: snapshot store " << options.store.string() << ": " << e.what() << "\n";
    return kStorageError;
  }
}

int run_report(const ReportOptions& options, const Services& services) {
  auto& err = *services.err;
  static const std::set<std::string> known = {"md", "csv", "json", "txt", "svg"};
  for (const auto& f : options.formats) {
    if (!known.contains(f)) {
      err << "error: unknown format '" << f << "' (expected md, csv, json, txt, svg)\n";
      return kConfigError;
    }
  }
  try {
    ReportBundle bundle = bundle_from_json(read_file(options.bundle));
    if (options.bins) bundle = build_report(bundle.sample, load_bins(*options.bins));

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw StorageError("cannot create " + options.out_dir.string() + ": " + ec.message());

    std::vector<fs::path> written;
    const auto emit = [&](const std::string& name, const std::string& content) {
      write_file(options.out_dir / name, content);
      written.push_back(options.out_dir / name);
    };
    std::set<std::string> wanted(options.formats.begin(), options.formats.end());
    if (wanted.contains("md")) emit("report.md", render_markdown(bundle));
    if (wanted.contains("csv")) emit("report.csv", render_csv(bundle));
    if (wanted.contains("json")) emit("report.json", render_json(bundle));
    for (const auto& h : bundle.histograms) {
      if (wanted.contains("txt")) {
        emit("hist_" + h.metric + ".txt",
             render_histogram_plot(h.histogram, PlotStyle::text, h.title));
      }
      if (wanted.contains("svg")) {
        emit("hist_" + h.metric + ".svg",
             render_histogram_plot(h.histogram, PlotStyle::svg, h.title));
      }
    }
    *services.out << "wrote " << written.size() << " file(s) to " << options.out_dir.string()
                  << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const StorageError& e) {
    err << "error: " << e.what() << "\n";
    return kStorageError;
  } catch (const ParseError& e) {
    err << "error: " << options.bundle.string() << ": " << e.what() << "\n";
    return kStorageError;
  }
}

int run_replicate(const ReplicateOptions& options, const Services& services) {
  auto& out = *services.out;
  auto& err = *services.err;
  const fs::path fixture = options.fixture_dir.value_or(services.replication_fixture);
  const fs::path store = options.out_dir / "snapshots.jsonl";
  const fs::path bundle_path = options.out_dir / "bundle.json";

  struct Check {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Check> checks;
  const auto finish = [&]() {
    std::vector<std::string> failed;
    for (const auto& c : checks) {
      out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
      if (!c.pass) failed.push_back(c.name);
    }
    if (failed.empty()) {
      out << "replication: all " << checks.size() << " structural checks passed\n";
      return static_cast<int>(kOk);
    }
    std::string names;
    for (const auto& f : failed) names += (names.empty() ? "" : ", ") + f;
    err << "replication failed: " << names << "\n";
    return static_cast<int>(kReplicationFailed);
  };

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) {
    checks.push_back({"pipeline", false, "cannot create " + options.out_dir.string()});
    return finish();
  }
  // The store is owned by this command; start from an empty one.
  fs::remove(store, ec);

  FetchOptions fetch;
  fetch.offline_dir = fixture;
  fetch.store = store;
  if (const int rc = run_fetch(fetch, services); rc != kOk) {
    checks.push_back({"pipeline", false, "fetch exited with " + std::to_string(rc)});
    return finish();
  }
  AnalyzeOptions analyze;
  analyze.store = store;
  analyze.n = static_cast<long long>(kPublishedSampleSize);
  analyze.out = bundle_path;
  if (const int rc = run_analyze(analyze, services); rc != kOk) {
    checks.push_back({"pipeline", false, "analyze exited with " + std::to_string(rc)});
    return finish();
  }
  ReportOptions report;
  report.bundle = bundle_path;
  report.out_dir = options.out_dir;
  report.formats = {"md", "csv", "json", "txt", "svg"};
  if (const int rc = run_report(report, services); rc != kOk) {
    checks.push_back({"pipeline", false, "report exited with " + std::to_string(rc)});
    return finish();
  }

  try {
    const StudySample candidates = SnapshotStore(store).load().sample;
    const ReportBundle bundle = bundle_from_json(read_file(bundle_path));
    const auto& chosen = bundle.sample.snapshots();

    checks.push_back({"unique_ids", candidates.size() == kPublishedUniqueIds,
                      std::to_string(candidates.size()) + " unique video ids after dedup (expected " +
                          std::to_string(kPublishedUniqueIds) + ")"});

    bool ordered = std::all_of(chosen.begin(), chosen.end(),
                               [](const auto& s) { return s.comments_enabled; }) &&
                   std::is_sorted(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) {
                     return a.views > b.views;
                   });
    std::set<std::string> chosen_ids;
    for (const auto& s : chosen) chosen_ids.insert(s.video_id);
    if (!chosen.empty()) {
      for (const auto& s : candidates.snapshots()) {
        if (s.comments_enabled && !chosen_ids.contains(s.video_id) &&
            s.views > chosen.back().views) {
          ordered = false;
        }
      }
    }
    checks.push_back({"selection", ordered && chosen.size() == kPublishedSampleSize,
                      std::to_string(chosen.size()) +
                          " comment-enabled videos with the most views (expected " +
                          std::to_string(kPublishedSampleSize) + ")" +
                          (ordered ? "" : "; selection order violated")});

    if (fs::exists(services.sampled_ids_file)) {
      std::set<std::string> listed;
      std::istringstream ids(read_file(services.sampled_ids_file));
      for (std::string line; std::getline(ids, line);) {
        if (!line.empty() && line.front() != '#') listed.insert(line);
      }
      checks.push_back({"sampled_ids", listed == chosen_ids,
                        listed == chosen_ids
                            ? "selected ids match the bundled id list"
                            : "selected ids differ from the bundled id list"});
    }

    checks.push_back({"quartile_split", bundle.upper_quartile_n == kPublishedUpperQuartileN,
                      std::to_string(bundle.upper_quartile_n) +
                          " videos in the three highest quartiles of views (expected " +
                          std::to_string(kPublishedUpperQuartileN) + ")"});

    std::string cat_detail = "category frequencies match the published table";
    const bool cats_ok = bundle.categories == published_categories();
    if (!cats_ok) {
      cat_detail = "category frequencies differ:";
      for (const auto& c : bundle.categories) {
        cat_detail += " " + c.category + "=" + std::to_string(c.count);
      }
    }
    checks.push_back({"categories", cats_ok, cat_detail});

    std::size_t violations = 0;
    std::string first_violation;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      std::vector<std::string> problems;
      if (const auto d = bundle.metrics[i].disp_value(); d && (*d < 0.0 || *d > 1.0)) {
        problems.push_back("video " + chosen[i].video_id + ": DisP " + fmt::full(*d) +
                           " outside [0, 1]");
      }
      for (auto& p : check_invariants(chosen[i])) problems.push_back(std::move(p));
      if (!problems.empty() && first_violation.empty()) first_violation = problems.front();
      violations += problems.size();
    }
    checks.push_back({"disp_bounds", violations == 0,
                      violations == 0 ? "DisP within [0, 1] and counts non-negative for every video"
                                      : std::to_string(violations) +
                                            " bound violation(s), first: " + first_violation});
  } catch (const std::exception& e) {
    checks.push_back({"pipeline", false, std::string("cannot read pipeline output: ") + e.what()});
  }
  return finish();
}

int run(const std::vector<std::string>& args, const Services& services) {
  CLI::App app{std::string("engage: relative engagement metrics (CpkI, VpkI, DisP) for "
                           "video statistics.\n") +
               kStructuralNote};
  app.name(args.empty() ? "engage" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file; flags win");

  FetchOptions fetch;
  std::string offline;
  std::string ids;
  int occasions = 0;
  auto* fetch_cmd = app.add_subcommand(
      "fetch", "Sample the most-popular chart and append snapshots to the store. The API "
               "key is read from ENGAGE_API_KEY.");
  fetch_cmd->add_option("--offline", offline, "Replay recorded pages sweep<k>_page<j>.json from DIR")
      ->check(CLI::ExistingDirectory);
  auto* region_opt = fetch_cmd->add_option("--region", fetch.region, "Two-letter region code");
  fetch_cmd->add_option("--occasions", occasions, "Number of sweeps")->check(CLI::PositiveNumber);
  fetch_cmd->add_option("--store", fetch.store, "Snapshot store (JSON lines)");
  fetch_cmd->add_option("--page-size", fetch.page_size, "Results per page (1-50)");
  fetch_cmd->add_option("--max-pages", fetch.max_pages, "Pages per sweep");
  fetch_cmd->add_option("--interval-ms", fetch.request_interval_ms, "Pause between requests");
  fetch_cmd->add_option("--ids", ids,
                        "Re-query the videos listed in FILE (one id per line) instead of the "
                        "chart. Statistics drift, so this does not reproduce old values.")
      ->check(CLI::ExistingFile);
  fetch_cmd->get_option("--offline")->excludes(region_opt);
  fetch_cmd->get_option("--offline")->excludes("--ids");

  AnalyzeOptions analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Select the study sample and compute all tables");
  analyze_cmd->add_option("--store", analyze.store, "Snapshot store")->required();
  analyze_cmd->add_option("--n", analyze.n, "Sample size");
  analyze_cmd->add_option("--out", analyze.out, "Bundle JSON to write");
  analyze_cmd->add_flag("--lenient", analyze.lenient, "Skip malformed store lines");

  ReportOptions report;
  std::string formats;
  std::string bins;
  auto* report_cmd = app.add_subcommand("report", "Render a bundle as tables and plots");
  report_cmd->add_option("--bundle", report.bundle, "Bundle JSON")->required();
  report_cmd->add_option("--format", formats, "Comma-separated: md,csv,json,txt,svg");
  report_cmd->add_option("--bins", bins, "JSON file overriding histogram bins");
  report_cmd->add_option("--out", report.out_dir, "Output directory");

  ReplicateOptions replicate;
  std::string fixture;
  auto* replicate_cmd = app.add_subcommand(
      "replicate", std::string("Run the pipeline on the bundled fixture and check the case "
                               "study's structural facts. ") +
                       kStructuralNote);
  replicate_cmd->add_option("--out", replicate.out_dir, "Output directory");
  replicate_cmd->add_option("--fixture", fixture, "Use another fixture directory");

  std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    *services.out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    *services.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    *services.err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  if (*fetch_cmd) {
    if (!offline.empty()) fetch.offline_dir = offline;
    if (!ids.empty()) fetch.ids_file = ids;
    if (occasions > 0) fetch.occasions = occasions;
    return run_fetch(fetch, services);
  }
  if (*analyze_cmd) return run_analyze(analyze, services);
  if (*report_cmd) {
    if (!formats.empty()) {
      report.formats.clear();
      std::stringstream ss(formats);
      for (std::string f; std::getline(ss, f, ',');) {
        if (f == "markdown") f = "md";
        if (!f.empty()) report.formats.push_back(f);
      }
    }
    if (!bins.empty()) report.bins = bins;
    return run_report(report, services);
  }
  if (*replicate_cmd) {
    if (!fixture.empty()) replicate.fixture_dir = fixture;
    return run_replicate(replicate, services);
  }
  return kConfigError;
}

}  // namespace engage::cli
