#pragma once

#include <optional>
#include <span>
#include <vector>

#include "engage/ratio.hpp"
#include "engage/snapshot.hpp"

namespace engage {

// The three relative engagement metrics of one video. Each is absent when
// its defining ratio has a zero denominator or an unknown input.
struct EngagementMetrics {
  std::optional<Ratio> cpki;  // comments per thousand impressions
  std::optional<Ratio> vpki;  // votes per thousand impressions
  std::optional<Ratio> disp;  // dislikes / (likes + dislikes)

  std::optional<double> cpki_value() const { return as_double(cpki); }
  std::optional<double> vpki_value() const { return as_double(vpki); }
  std::optional<double> disp_value() const { return as_double(disp); }

  friend bool operator==(const EngagementMetrics&,
                         const EngagementMetrics&) = default;

 private:
  static std::optional<double> as_double(const std::optional<Ratio>& r) {
    if (!r) return std::nullopt;
    return r->to_double();
  }
};

// comments * 1000 / views; absent when views <= 0.
std::optional<Ratio> compute_cpki(Count comments, Count views);

// (likes + dislikes) * 1000 / views; absent when views <= 0 or either vote
// count is unknown. Zero votes on a viewed video gives 0.
std::optional<Ratio> compute_vpki(std::optional<Count> likes,
                                  std::optional<Count> dislikes, Count views);

// dislikes / (likes + dislikes); absent when either count is unknown or the
// vote total is not positive. Does not depend on views.
std::optional<Ratio> compute_disp(std::optional<Count> likes,
                                  std::optional<Count> dislikes);

EngagementMetrics compute_metrics(const VideoStatsSnapshot& snapshot);

// Metrics for every snapshot, computed in parallel. Output order matches
// input order.
std::vector<EngagementMetrics> compute_metrics_batch(
    std::span<const VideoStatsSnapshot> snapshots);

namespace serial {
// Single-threaded reference for compute_metrics_batch.
std::vector<EngagementMetrics> compute_metrics_batch(
    std::span<const VideoStatsSnapshot> snapshots);
}  // namespace serial

}  // namespace engage
