// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "engage/cli.hpp"
#include "engage/ingestion.hpp"
#include "engage/metrics.hpp"
#include "engage/report.hpp"
#include "engage/snapshot_store.hpp"
#include "engage/stats.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace engage;
using engage::testing::data_dir;
using engage::testing::make_snapshot;
using engage::testing::slurp;
using engage::testing::TempDir;

namespace {

// Collects failed expectations of one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<void(Check&)> body;
};

OptionalValues opt(std::initializer_list<double> xs) {
  OptionalValues out;
  for (double x : xs) out.emplace_back(x);
  return out;
}

bool close(double got, double want, double rel) {
  if (want == 0.0) return std::abs(got) <= rel;
  return std::abs(got - want) <= rel * std::abs(want);
}

void formula_oracle(Check& c) {
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<Count> views(1, 100'000'000);
  for (int i = 0; i < 1000; ++i) {
    const Count v = views(rng);
    const Count cap = std::max<Count>(v / 10, 1);
    std::uniform_int_distribution<Count> part(0, cap);
    const Count likes = part(rng), dislikes = part(rng), comments = part(rng);
    const auto snap = make_snapshot("v", v, likes, dislikes, comments);
    const auto m = compute_metrics(snap);
    const auto cpki = oracle::cpki(comments, v);
    const auto vpki = oracle::vpki(likes, dislikes, v);
    const auto disp = oracle::disp(likes, dislikes);
    c.expect(m.cpki && close(*m.cpki_value(), oracle::to_double(*cpki), 1e-12),
             "cpki tuple " + std::to_string(i));
    c.expect(m.vpki && close(*m.vpki_value(), oracle::to_double(*vpki), 1e-12),
             "vpki tuple " + std::to_string(i));
    c.expect(disp.has_value() == m.disp.has_value(), "disp presence " + std::to_string(i));
    if (disp && m.disp) {
      c.expect(close(*m.disp_value(), oracle::to_double(*disp), 1e-12),
               "disp tuple " + std::to_string(i));
    }
  }
}

void disp_bounds(Check& c) {
  std::mt19937_64 rng(10000);
  std::uniform_int_distribution<Count> votes(0, 5000);
  std::bernoulli_distribution zero(0.05);
  for (int i = 0; i < 10000; ++i) {
    const Count a = zero(rng) ? 0 : votes(rng);
    const Count b = zero(rng) ? 0 : votes(rng);
    const auto ab = compute_disp(a, b);
    const auto ba = compute_disp(b, a);
    if (a + b == 0) {
      c.expect(!ab && !ba, "zero votes must be absent");
      continue;
    }
    c.expect(ab && ba, "defined votes must give DisP");
    if (!ab || !ba) continue;
    const double x = ab->to_double();
    c.expect(x >= 0.0 && x <= 1.0, "DisP outside [0, 1]");
    using Wide = __int128;
    const Wide lhs = Wide(ab->numerator()) * ba->denominator() +
                     Wide(ba->numerator()) * ab->denominator();
    c.expect(lhs == Wide(ab->denominator()) * ba->denominator(),
             "DisP(a,b) + DisP(b,a) != 1 exactly");
  }
}

void pearson_suite(Check& c) {
  const auto x = opt({1, 2, 3, 4, 5});
  const auto twice = opt({2, 4, 6, 8, 10});
  const auto neg = opt({-1, -2, -3, -4, -5});
  c.expect(pearson(x, twice).r == 1.0, "r(x, 2x) = 1");
  c.expect(pearson(x, neg).r == -1.0, "r(x, -x) = -1");
  c.expect(pearson(opt({1, 2, 3, 4}), opt({1, 3, 2, 4})).r == 0.8, "hand case r = 0.8");

  const std::vector<NamedColumn> cols = {
      {"a", opt({1, 5, 2, 8, 3})}, {"b", opt({2, 1, 4, 3, 9})}, {"c", opt({7, 7, 1, 2, 0})}};
  const auto m = correlation_matrix(cols);
  for (std::size_t i = 0; i < 3; ++i) {
    c.expect(m.at(i, i).r == 1.0, "diagonal 1");
    for (std::size_t j = 0; j < 3; ++j) c.expect(m.at(i, j) == m.at(j, i), "symmetry");
  }

  std::mt19937_64 rng(100);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::bernoulli_distribution flip(0.5);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> xs(20), ys(20), xt(20), yt(20);
    for (int i = 0; i < 20; ++i) {
      xs[i] = normal(rng);
      ys[i] = 0.3 * xs[i] + normal(rng);
    }
    const double a = scale(rng) * (flip(rng) ? -1 : 1), b = normal(rng) * 100;
    const double d = scale(rng) * (flip(rng) ? -1 : 1), e = normal(rng) * 100;
    for (int i = 0; i < 20; ++i) {
      xt[i] = a * xs[i] + b;
      yt[i] = d * ys[i] + e;
    }
    const double r = *pearson(std::span<const double>(xs), std::span<const double>(ys)).r;
    const double rt = *pearson(std::span<const double>(xt), std::span<const double>(yt)).r;
    const double sign = (a > 0) == (d > 0) ? 1.0 : -1.0;
    c.expect(std::abs(rt - sign * r) <= 1e-12, "affine transform " + std::to_string(t));
    c.expect(std::abs(r - oracle::pearson(xs, ys)) <= 1e-12, "oracle r " + std::to_string(t));
  }
}

void summary_oracle(Check& c) {
  const std::vector<std::vector<double>> vectors = {
      {2, 4, 4, 4, 5, 5, 7, 9},
      {0.195, 0.9, 1.3, 2.7, 109.354},
      {1.285, 2.5, 3.75, 63.723, 10.5, 8.25},
      {-3.5, 0.25, 7.125, 2, 2, 9.75, -1, 4.5, 0.001, 6},
      {0.0075, 0.04, 0.1044, 0.8827, 0.12, 0.06, 0.02},
  };
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const auto& xs = vectors[k];
    const auto s = summarize(OptionalValues(xs.begin(), xs.end()));
    const auto o = oracle::moments(xs);
    const std::string tag = "vector " + std::to_string(k + 1);
    c.expect(s.mean && oracle::relative_error(*s.mean, o.mean) < 1e-9, tag + " mean");
    c.expect(s.std_dev && oracle::relative_error(*s.std_dev, o.sd) < 1e-9, tag + " sd");
    c.expect(s.skewness && oracle::relative_error(*s.skewness, o.skewness) < 1e-9,
             tag + " skewness");
    c.expect(s.kurtosis && oracle::relative_error(*s.kurtosis, o.kurtosis) < 1e-9,
             tag + " kurtosis");
  }
}

void quartile_split(Check& c) {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<VideoStatsSnapshot> snaps;
    std::uniform_int_distribution<Count> views(0, trial % 2 ? 10 : 50'000'000);  // ties too
    for (int i = 0; i < 100; ++i) snaps.push_back(make_snapshot("v" + std::to_string(i), views(rng)));
    const auto kept = quartile_filter(StudySample(snaps), views_key(), QuartileSet::top_three());
    c.expect(kept.size() == 75, "trial " + std::to_string(trial) + " kept " +
                                    std::to_string(kept.size()));
  }
}

StudySample fixture_selection() {
  FetchConfig config;
  config.request_interval = std::chrono::milliseconds{0};
  const auto candidates =
      sample_trending(config, fixture_transport_factory(data_dir() / "replication"), 3).sample;
  return select_study_sample(candidates, 100).sample;
}

void category_table(Check& c) {
  const std::vector<CategoryCount> published = {
      {"Entertainment", 24}, {"Tech", 15},   {"Sports", 11},   {"Comedy", 9}, {"Education", 9},
      {"News", 8},           {"Film", 7},    {"Animals", 4},   {"Music", 4},  {"People", 4},
      {"Nonprofit", 3},      {"Howto", 1},   {"Travel", 1},
  };
  const auto counts = category_counts(fixture_selection());
  c.expect(counts == published, "category table differs");
  std::size_t total = 0;
  for (const auto& cc : counts) total += cc.count;
  c.expect(total == 100, "categories sum to " + std::to_string(total));
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  TempDir capture;
  const auto log = capture / "out.txt";
  const std::string cmd = std::string("\"") + ENGAGE_CLI_PATH + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) *output = slurp(log);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void protocol_replication(Check& c) {
  TempDir dir;
  std::string out;
  const int rc = run_cli("replicate --out \"" + (dir / "rep").string() + "\"", &out);
  c.expect(rc == 0, "replicate exited " + std::to_string(rc) + "\n" + out);
  c.expect(out.find("106 unique ids") != std::string::npos, "fetch did not report 106 ids");
  c.expect(out.find("analyzed 100 videos") != std::string::npos, "sample is not 100");
  for (const char* check :
       {"unique_ids", "selection", "sampled_ids", "quartile_split", "categories", "disp_bounds"}) {
    c.expect(out.find(std::string("[PASS] ") + check) != std::string::npos,
             std::string("check ") + check + " did not pass");
  }
  c.expect(out.find("[FAIL]") == std::string::npos, "a replication check failed");
}

void determinism(Check& c) {
  TempDir dir;
  const auto store = dir / "snapshots.jsonl";
  c.expect(run_cli("fetch --offline \"" + (data_dir() / "replication").string() +
                   "\" --store \"" + store.string() + "\"") == 0,
           "fetch failed");
  for (const char* run : {"a", "b"}) {
    const auto bundle = dir / (std::string(run) + ".json");
    c.expect(run_cli("analyze --store \"" + store.string() + "\" --out \"" + bundle.string() +
                     "\"") == 0,
             std::string("analyze ") + run);
    c.expect(run_cli("report --bundle \"" + bundle.string() +
                     "\" --format md,csv,json,txt,svg --out \"" + (dir / run).string() + "\"") == 0,
             std::string("report ") + run);
  }
  c.expect(slurp(dir / "a.json") == slurp(dir / "b.json"), "bundle bytes differ");
  for (const char* name : {"report.md", "report.csv", "report.json", "hist_cpki.txt",
                           "hist_vpki.txt", "hist_disp.txt", "hist_cpki.svg", "hist_vpki.svg",
                           "hist_disp.svg"}) {
    const auto a = dir / "a" / name, b = dir / "b" / name;
    c.expect(fs::exists(a) && !slurp(a).empty(), std::string(name) + " missing");
    c.expect(slurp(a) == slurp(b), std::string(name) + " differs between runs");
  }
}

void non_reproducibility_statement(Check& c) {
  // Ratio of the published sample means against the published mean CpkI.
  const double ratio_of_means = 1000.0 * 3526.0 / 2456693.0;
  c.expect(std::abs(ratio_of_means - 1.435) < 5e-4, "ratio of means is not 1.435");
  c.expect(std::abs(ratio_of_means - 2.687) > 1.0, "ratio of means matches mean CpkI");

  // Mean of per-video ratios differs from the ratio of means on any skewed sample.
  const auto b = build_report(fixture_selection());
  const double mean_cpki = *b.summary_metrics[0].summary.mean;
  const double fixture_ratio =
      1000.0 * *b.summary_basic[1].summary.mean / *b.summary_basic[0].summary.mean;
  c.expect(std::abs(mean_cpki - fixture_ratio) > 0.1,
           "fixture cannot tell mean-of-ratios from ratio-of-means");

  const std::string readme = slurp(fs::path(ENGAGE_SOURCE_DIR) / "README.md");
  for (const char* needle : {"2,456,693", "3,526", "1.435", "2.687", "10.497", "10.44%",
                             "not reproducible", "ratio of means"}) {
    c.expect(readme.find(needle) != std::string::npos,
             std::string("README lacks \"") + needle + "\"");
  }
}

void degenerate_inputs(Check& c) {
  // views = 0
  const auto zero_views = compute_metrics(make_snapshot("z", 0, 5, 5, 5));
  c.expect(!zero_views.cpki && !zero_views.vpki, "views=0 must leave CpkI and VpkI absent");
  c.expect(zero_views.disp_value() == 0.5, "views=0 keeps DisP");
  // zero votes
  const auto no_votes = compute_metrics(make_snapshot("n", 100, 0, 0, 1));
  c.expect(!no_votes.disp && no_votes.vpki_value() == 0.0, "zero votes: DisP absent, VpkI 0");
  // all dislikes absent
  std::vector<VideoStatsSnapshot> nodis;
  for (int i = 0; i < 8; ++i) nodis.push_back(make_snapshot("d" + std::to_string(i), 100 + i, 3 + i, {}, 1 + i % 3));
  const auto b = build_report(StudySample(nodis));
  c.expect(b.summary_metrics[1].summary.n == 0 && b.summary_metrics[2].summary.n == 0,
           "VpkI/DisP must be absent without dislikes");
  c.expect(!b.provenance.coverage_notes.empty(), "coverage note missing");
  c.expect(b.annotations.contains(table::kMetrics), "metric table not annotated");
  // constant correlation columns
  const auto constant = pearson(opt({4, 4, 4, 4}), opt({1, 2, 3, 4}));
  c.expect(constant.status == CorrelationStatus::constant_series && !constant.r,
           "constant column must give constant_series");
  // empty samples
  c.expect(summarize(OptionalValues{}) == SampleSummary{}, "empty summary must be all absent");
  bool threw = false;
  try {
    (void)build_report(StudySample{});
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  c.expect(threw, "empty sample report must be rejected");
  TempDir dir;
  engage::testing::write_text(dir / "empty.jsonl", "");
  std::ostringstream out, err;
  cli::Services s = cli::default_services();
  s.out = &out;
  s.err = &err;
  cli::AnalyzeOptions analyze;
  analyze.store = dir / "empty.jsonl";
  analyze.out = dir / "b.json";
  c.expect(cli::run_analyze(analyze, s) == cli::kEmptySample, "empty store must exit 5");
  // single-element and n/a paths
  const auto single = pearson(opt({1}), opt({2}));
  c.expect(single.status == CorrelationStatus::insufficient_n, "n=1 correlation");
  c.expect(histogram(OptionalValues{}, default_bins().disp).total() == 0, "empty histogram");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "formula oracle equivalence", 1.0, formula_oracle},
      {2, "DisP bounds", 1.0, disp_bounds},
      {3, "Pearson suite", 1.0, pearson_suite},
      {4, "summary oracle", 1.0, summary_oracle},
      {5, "quartile split keeps 75 of 100", 1.0, quartile_split},
      {6, "category table replication", 1.0, category_table},
      {7, "protocol replication", 5.0, protocol_replication},
      {8, "determinism", 5.0, determinism},
      {9, "non-reproducibility statement", 1.0, non_reproducibility_statement},
      {10, "degenerate inputs", 1.0, degenerate_inputs},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("unexpected exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= criterion.limit_seconds) {
      check.failures.push_back("took " + std::to_string(seconds) + " s, limit " +
                               std::to_string(criterion.limit_seconds) + " s");
    }
    const bool pass = check.failures.empty();
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << criterion.id << ": "
              << criterion.name << " (" << static_cast<long>(seconds * 1000) << " ms)\n";
    for (std::size_t i = 0; i < check.failures.size() && i < 5; ++i) {
      std::cout << "      " << check.failures[i] << "\n";
    }
    if (!pass) ++failed;
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed"
                            : std::to_string(failed) + " acceptance criteria failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}
