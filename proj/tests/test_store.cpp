#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "engage/errors.hpp"
#include "engage/snapshot_store.hpp"
#include "test_support.hpp"

namespace engage {
namespace {

using testing::make_snapshot;
using testing::slurp;
using testing::TempDir;
using testing::write_text;

std::vector<VideoStatsSnapshot> three() {
  return {make_snapshot("a", 10, 1, 0, 2, "Music"), make_snapshot("b", 20, std::nullopt, 4, 1),
          make_snapshot("c", 30)};
}

TEST(SnapshotLine, FixedFieldOrder) {
  const auto line = snapshot_to_json_line(make_snapshot("b", 20, std::nullopt, 4, 1));
  EXPECT_EQ(line,
            R"({"video_id":"b","fetched_at":"2013-12-09T10:00:00Z","views":20,"likes":null,)"
            R"("dislikes":4,"comments":1,"comments_enabled":true,"category":"Entertainment"})");
}

TEST(SnapshotLine, IgnoresUnknownFieldsAndNamesBadOnes) {
  const auto s = snapshot_from_json_line(
      R"({"video_id":"x","fetched_at":"2013-12-09T10:00:00Z","views":5,"likes":null,)"
      R"("dislikes":null,"comments":null,"comments_enabled":false,"category":"News","extra":1})");
  EXPECT_EQ(s.video_id, "x");
  EXPECT_EQ(s.views, 5);
  try {
    (void)snapshot_from_json_line(R"({"video_id":"x","fetched_at":"2013-12-09T10:00:00Z",)"
                                  R"("views":"many"})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "views");
  }
}

TEST(Store, RoundTripInOrder) {
  TempDir dir;
  SnapshotStore store(dir / "s.jsonl");
  EXPECT_EQ(store_snapshots(store, three()), 3u);
  const auto loaded = load_snapshots(store);
  EXPECT_EQ(loaded.sample.snapshots(), three());
  EXPECT_EQ(loaded.records, 3u);
  EXPECT_EQ(loaded.skipped, 0u);
}

TEST(Store, WritingNothingLeavesFileUntouched) {
  TempDir dir;
  SnapshotStore store(dir / "s.jsonl");
  EXPECT_EQ(store.append({}), 0u);
  EXPECT_FALSE(std::filesystem::exists(store.path()));
  store.append(three());
  const auto before = slurp(store.path());
  EXPECT_EQ(store.append({}), 0u);
  EXPECT_EQ(slurp(store.path()), before);
}

TEST(Store, AppendsAccumulate) {
  TempDir dir;
  SnapshotStore store(dir / "s.jsonl");
  const auto snaps = three();
  store.append(std::span(snaps).first(2));
  const auto first_bytes = slurp(store.path());
  std::vector<VideoStatsSnapshot> more = {make_snapshot("d", 1), make_snapshot("e", 2),
                                          make_snapshot("f", 3)};
  store.append(more);
  const auto all = slurp(store.path());
  EXPECT_EQ(all.rfind(first_bytes, 0), 0u);  // earlier lines untouched
  EXPECT_EQ(std::count(all.begin(), all.end(), '\n'), 5);
  EXPECT_EQ(store.load().records, 5u);
}

TEST(Store, RerunAppendsAgainAndReadDedups) {
  TempDir dir;
  SnapshotStore store(dir / "s.jsonl");
  store.append(three());
  store.append(three());
  const auto loaded = store.load();
  EXPECT_EQ(loaded.records, 6u);
  EXPECT_EQ(loaded.sample.size(), 3u);
}

TEST(Store, LenientSkipsCorruptLine) {
  TempDir dir;
  const auto lines = three();
  std::string text = snapshot_to_json_line(lines[0]) + "\n{broken\n" +
                     snapshot_to_json_line(lines[1]) + "\n" + snapshot_to_json_line(lines[2]) +
                     "\n";
  write_text(dir / "s.jsonl", text);
  SnapshotStore store(dir / "s.jsonl");
  const auto loaded = store.load({ParseMode::lenient, {}});
  EXPECT_EQ(loaded.sample.size(), 3u);
  EXPECT_EQ(loaded.skipped, 1u);
  EXPECT_EQ(loaded.warnings.size(), 1u);
  EXPECT_NE(loaded.warnings[0].find("line 2"), std::string::npos);
}

TEST(Store, StrictNamesLineNumber) {
  TempDir dir;
  const auto lines = three();
  write_text(dir / "s.jsonl", snapshot_to_json_line(lines[0]) + "\n" +
                                  snapshot_to_json_line(lines[1]) + "\nnot json\n");
  try {
    (void)SnapshotStore(dir / "s.jsonl").load();
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Store, LatestTimestampWins) {
  TempDir dir;
  auto later = make_snapshot("a", 99);
  later.fetched_at += std::chrono::hours(72);
  const auto earlier = make_snapshot("a", 1);
  SnapshotStore store(dir / "s.jsonl");
  store.append(std::vector{later, earlier});
  const auto loaded = store.load();
  ASSERT_EQ(loaded.sample.size(), 1u);
  EXPECT_EQ(loaded.sample.snapshots()[0].views, 99);
}

TEST(Store, FilterPredicate) {
  TempDir dir;
  SnapshotStore store(dir / "s.jsonl");
  store.append(three());
  LoadOptions opts;
  opts.filter = [](const VideoStatsSnapshot& s) { return s.video_id != "b"; };
  const auto loaded = store.load(opts);
  EXPECT_EQ(loaded.sample.size(), 2u);
  EXPECT_EQ(loaded.records, 3u);
}

TEST(Store, MissingFileIsStorageError) {
  TempDir dir;
  EXPECT_THROW((void)SnapshotStore(dir / "absent.jsonl").load(), StorageError);
  EXPECT_THROW((void)SnapshotStore(dir / "no" / "such" / "dir.jsonl").append(three()),
               StorageError);
}

TEST(Store, RoundTripEqualsDedupProperty) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    TempDir dir;
    std::vector<VideoStatsSnapshot> xs;
    const int count = static_cast<int>(rng() % 30);
    for (int i = 0; i < count; ++i) {
      auto s = make_snapshot("v" + std::to_string(rng() % 10), static_cast<Count>(rng() % 1000),
                             rng() % 3 ? std::optional<Count>(rng() % 50) : std::nullopt,
                             rng() % 3 ? std::optional<Count>(rng() % 50) : std::nullopt,
                             rng() % 3 ? std::optional<Count>(rng() % 50) : std::nullopt);
      s.fetched_at += std::chrono::seconds(rng() % 5);
      xs.push_back(s);
    }
    SnapshotStore store(dir / "s.jsonl");
    store.append(xs);
    if (xs.empty()) {
      EXPECT_FALSE(std::filesystem::exists(store.path()));
      continue;
    }
    EXPECT_EQ(store.load().sample.snapshots(), StudySample::dedup_latest(xs).snapshots());
  }
}

TEST(Store, ConcurrentAppendersDoNotInterleave) {
  TempDir dir;
  SnapshotStore store(dir / "s.jsonl");
  std::vector<std::thread> writers;
  for (int w = 0; w < 4; ++w) {
    writers.emplace_back([&, w] {
      for (int i = 0; i < 25; ++i) {
        store.append(std::vector{make_snapshot("w" + std::to_string(w) + "_" + std::to_string(i),
                                               i, 1, 1, 1)});
      }
    });
  }
  for (auto& t : writers) t.join();
  const auto loaded = store.load();
  EXPECT_EQ(loaded.records, 100u);
  EXPECT_EQ(loaded.sample.size(), 100u);
}

}  // namespace
}  // namespace engage
