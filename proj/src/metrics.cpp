#include "engage/metrics.hpp"

#include <stdexcept>
#include <string>

namespace engage {

namespace {

Count checked_add(Count a, Count b) {
  Count out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("count sum overflows 64 bits");
  }
  return out;
}

Count per_mille(Count numerator) {
  Count out = 0;
  if (__builtin_mul_overflow(numerator, Count{1000}, &out)) {
    throw std::overflow_error("count too large for per-mille rate");
  }
  return out;
}

}  // namespace

std::optional<Ratio> compute_cpki(Count comments, Count views) {
  if (views <= 0) return std::nullopt;
  return Ratio(per_mille(comments), views);
}

std::optional<Ratio> compute_vpki(std::optional<Count> likes,
                                  std::optional<Count> dislikes, Count views) {
  if (views <= 0 || !likes || !dislikes) return std::nullopt;
  return Ratio(per_mille(checked_add(*likes, *dislikes)), views);
}

std::optional<Ratio> compute_disp(std::optional<Count> likes,
                                  std::optional<Count> dislikes) {
  if (!likes || !dislikes) return std::nullopt;
  const Count total = checked_add(*likes, *dislikes);
  if (total <= 0) return std::nullopt;
  return Ratio(*dislikes, total);
}

EngagementMetrics compute_metrics(const VideoStatsSnapshot& snapshot) {
  EngagementMetrics m;
  if (snapshot.comments) m.cpki = compute_cpki(*snapshot.comments, snapshot.views);
  m.vpki = compute_vpki(snapshot.likes, snapshot.dislikes, snapshot.views);
  m.disp = compute_disp(snapshot.likes, snapshot.dislikes);
  return m;
}

std::vector<EngagementMetrics> compute_metrics_batch(
    std::span<const VideoStatsSnapshot> snapshots) {
  const auto n = static_cast<std::ptrdiff_t>(snapshots.size());
  std::vector<EngagementMetrics> out(snapshots.size());
  // Exceptions may not cross the parallel region; remember the first one.
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = compute_metrics(snapshots[i]);
    } catch (const std::exception& e) {
#pragma omp critical(engage_metrics_error)
      if (!failed) {
        failed = true;
        message = e.what();
      }
    }
  }
  if (failed) throw std::overflow_error(message);
  return out;
}

namespace serial {

std::vector<EngagementMetrics> compute_metrics_batch(
    std::span<const VideoStatsSnapshot> snapshots) {
  std::vector<EngagementMetrics> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(compute_metrics(s));
  return out;
}

}  // namespace serial

}  // namespace engage
