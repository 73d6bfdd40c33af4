// Serial reference vs OpenMP kernels on synthetic data.
//
//   bench_kernels [videos] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "engage/metrics.hpp"
#include "engage/stats.hpp"

using namespace engage;

namespace {

std::vector<VideoStatsSnapshot> synthetic(std::size_t n) {
  std::mt19937_64 rng(42);
  std::lognormal_distribution<double> views(13.0, 1.8);
  std::uniform_real_distribution<double> rate(0.0005, 0.02);
  std::bernoulli_distribution missing(0.05);
  std::vector<VideoStatsSnapshot> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = out[i];
    s.video_id = "v" + std::to_string(i);
    s.views = static_cast<Count>(views(rng)) + 1;
    s.likes = static_cast<Count>(s.views * rate(rng));
    if (!missing(rng)) s.dislikes = static_cast<Count>(*s.likes * rate(rng) * 10);
    s.comments = static_cast<Count>(s.views * rate(rng) / 4);
    s.comments_enabled = true;
  }
  return out;
}

double best_ms(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const std::string& name, double serial_ms, double parallel_ms, bool same) {
  std::cout << std::left << std::setw(22) << name << std::right << std::fixed
            << std::setprecision(2) << std::setw(12) << serial_ms << std::setw(12) << parallel_ms
            << std::setw(9) << serial_ms / parallel_ms << "x" << (same ? "" : "  MISMATCH")
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1'000'000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  const auto snaps = synthetic(n);
  std::cout << n << " videos, " << omp_get_max_threads() << " thread(s), best of " << repeats
            << "\n\n";
  std::cout << std::left << std::setw(22) << "kernel" << std::right << std::setw(12)
            << "serial ms" << std::setw(12) << "omp ms" << std::setw(10) << "speedup" << "\n";

  std::vector<EngagementMetrics> ms, mp;
  const double m_serial = best_ms(repeats, [&] { ms = serial::compute_metrics_batch(snaps); });
  const double m_par = best_ms(repeats, [&] { mp = compute_metrics_batch(snaps); });
  row("metrics batch", m_serial, m_par, ms == mp);

  std::vector<NamedColumn> cols(8);
  const char* names[] = {"cpki", "vpki", "disp", "views", "likes", "dislikes", "comments", "votes"};
  for (int c = 0; c < 8; ++c) {
    cols[c].name = names[c];
    cols[c].values.reserve(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = snaps[i];
    const auto& m = mp[i];
    const auto as_opt = [](std::optional<Count> v) -> std::optional<double> {
      if (!v) return std::nullopt;
      return static_cast<double>(*v);
    };
    cols[0].values.push_back(m.cpki_value());
    cols[1].values.push_back(m.vpki_value());
    cols[2].values.push_back(m.disp_value());
    cols[3].values.emplace_back(static_cast<double>(s.views));
    cols[4].values.push_back(as_opt(s.likes));
    cols[5].values.push_back(as_opt(s.dislikes));
    cols[6].values.push_back(as_opt(s.comments));
    cols[7].values.push_back(as_opt(s.votes()));
  }
  CorrelationMatrix cs, cp;
  const double c_serial = best_ms(repeats, [&] { cs = serial::correlation_matrix(cols); });
  const double c_par = best_ms(repeats, [&] { cp = correlation_matrix(cols); });
  row("correlation matrix", c_serial, c_par, cs == cp);

  const BinSpec bins{{0, .2, .6, 1, 2, 4, 8, 16}, {}};
  Histogram hs, hp;
  const double h_serial = best_ms(repeats, [&] { hs = serial::histogram(cols[0].values, bins); });
  const double h_par = best_ms(repeats, [&] { hp = histogram(cols[0].values, bins); });
  row("histogram", h_serial, h_par, hs == hp);
  return (ms == mp && cs == cp && hs == hp) ? 0 : 1;
}
