#include "engage/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "engage/student_t.hpp"

namespace engage {

namespace {

std::string short_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

bool usable(const std::optional<double>& v) { return v && !std::isnan(*v); }

std::vector<double> defined_values(std::span<const std::optional<double>> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    if (usable(v)) out.push_back(*v);
  }
  return out;
}

// Bin index for v, or -1 for underflow and bin_count for overflow.
std::ptrdiff_t locate(const std::vector<double>& edges, double v) {
  if (v < edges.front()) return -1;
  const auto last = static_cast<std::ptrdiff_t>(edges.size()) - 1;
  if (v > edges.back()) return last;
  if (v == edges.back()) return last - 1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  return static_cast<std::ptrdiff_t>(it - edges.begin()) - 1;
}

void check_equal_lengths(std::span<const NamedColumn> columns) {
  for (const auto& c : columns) {
    if (c.values.size() != columns.front().values.size()) {
      throw std::invalid_argument("correlation columns differ in length: " +
                                  columns.front().name + " vs " + c.name);
    }
  }
}

std::size_t count_usable(const OptionalValues& values) {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), usable));
}

// Diagonal cell: r = 1 for a usable variable, otherwise the same error a
// self-correlation would produce.
CorrelationCell diagonal_cell(const NamedColumn& column) {
  CorrelationCell cell = pearson(column.values, column.values);
  if (cell.defined()) {
    cell.r = 1.0;
    cell.p_value.reset();
  }
  return cell;
}

}  // namespace

void BinSpec::validate() const {
  if (edges.size() < 2) throw std::invalid_argument("bin spec needs at least two edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) throw std::invalid_argument("bin edges must be finite");
    if (i > 0 && !(edges[i] > edges[i - 1])) {
      throw std::invalid_argument("bin edges must be strictly increasing");
    }
  }
  if (!labels.empty() && labels.size() != bin_count()) {
    throw std::invalid_argument("bin spec has " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(bin_count()) + " bins");
  }
}

std::string BinSpec::label(std::size_t bin) const {
  if (bin < labels.size()) return labels[bin];
  return short_number(edges.at(bin)) + "-" + short_number(edges.at(bin + 1));
}

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0}) + underflow +
         overflow;
}

std::optional<std::string> Histogram::mode_label() const {
  const auto it = std::max_element(counts.begin(), counts.end());
  if (it == counts.end() || *it == 0) return std::nullopt;
  return bins.label(static_cast<std::size_t>(it - counts.begin()));
}

std::string to_string(CorrelationStatus status) {
  switch (status) {
    case CorrelationStatus::ok: return "ok";
    case CorrelationStatus::insufficient_n: return "insufficient n";
    case CorrelationStatus::constant_series: return "constant series";
  }
  return "unknown";
}

CorrelationMatrix::CorrelationMatrix(std::vector<std::string> names)
    : names_(std::move(names)), cells_(names_.size() * names_.size()) {}

SampleSummary summarize(std::span<const std::optional<double>> values) {
  const std::vector<double> xs = defined_values(values);
  SampleSummary s;
  s.n = xs.size();
  if (xs.empty()) return s;

  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  s.min = *lo;
  s.max = *hi;

  const long double n = static_cast<long double>(xs.size());
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  const long double mean = sum / n;
  s.mean = std::clamp(static_cast<double>(mean), *s.min, *s.max);
  if (xs.size() < 2) return s;

  long double m2 = 0.0L;
  for (double x : xs) {
    const long double d = x - mean;
    m2 += d * d;
  }
  const long double sd = std::sqrt(m2 / (n - 1.0L));
  s.std_dev = static_cast<double>(sd);
  if (sd == 0.0L || *s.min == *s.max) {
    s.std_dev = 0.0;
    return s;
  }

  long double z3 = 0.0L;
  long double z4 = 0.0L;
  for (double x : xs) {
    const long double z = (x - mean) / sd;
    z3 += z * z * z;
    z4 += z * z * z * z;
  }
  if (xs.size() >= 3) {
    s.skewness = static_cast<double>(n / ((n - 1.0L) * (n - 2.0L)) * z3);
  }
  if (xs.size() >= 4) {
    const long double a = n * (n + 1.0L) / ((n - 1.0L) * (n - 2.0L) * (n - 3.0L));
    const long double b = 3.0L * (n - 1.0L) * (n - 1.0L) / ((n - 2.0L) * (n - 3.0L));
    s.kurtosis = static_cast<double>(a * z4 - b);
  }
  return s;
}

SampleSummary summarize(std::span<const std::optional<double>> values,
                        const BinSpec& bins) {
  SampleSummary s = summarize(values);
  if (s.n > 0) s.bin_mode = serial::histogram(values, bins).mode_label();
  return s;
}

CorrelationCell pearson(std::span<const std::optional<double>> xs,
                        std::span<const std::optional<double>> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("pearson: series lengths differ (" +
                                std::to_string(xs.size()) + " vs " +
                                std::to_string(ys.size()) + ")");
  }
  std::vector<double> a;
  std::vector<double> b;
  a.reserve(xs.size());
  b.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (usable(xs[i]) && usable(ys[i])) {
      a.push_back(*xs[i]);
      b.push_back(*ys[i]);
    }
  }
  return pearson(std::span<const double>(a), std::span<const double>(b));
}

CorrelationCell pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("pearson: series lengths differ");
  }
  CorrelationCell cell;
  cell.n = xs.size();
  if (cell.n < 2) {
    cell.status = CorrelationStatus::insufficient_n;
    return cell;
  }
  const long double n = static_cast<long double>(cell.n);
  long double sx = 0.0L;
  long double sy = 0.0L;
  for (std::size_t i = 0; i < cell.n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const long double mx = sx / n;
  const long double my = sy / n;
  long double sxx = 0.0L;
  long double syy = 0.0L;
  long double sxy = 0.0L;
  for (std::size_t i = 0; i < cell.n; ++i) {
    const long double dx = xs[i] - mx;
    const long double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys) || sxx == 0.0L || syy == 0.0L) {
    cell.status = CorrelationStatus::constant_series;
    return cell;
  }
  const double r = std::clamp(static_cast<double>(sxy / std::sqrt(sxx * syy)), -1.0, 1.0);
  cell.status = CorrelationStatus::ok;
  cell.r = r;
  if (cell.n >= 3 && std::fabs(r) < 1.0) {
    cell.p_value = pearson_p_value(r, static_cast<double>(cell.n));
  }
  return cell;
}

CorrelationMatrix correlation_matrix(std::span<const NamedColumn> columns) {
  if (columns.empty()) return CorrelationMatrix{};
  check_equal_lengths(columns);
  std::vector<std::string> names;
  for (const auto& c : columns) names.push_back(c.name);
  CorrelationMatrix m(std::move(names));

  const auto k = static_cast<std::ptrdiff_t>(columns.size());
  const std::ptrdiff_t pairs = k * k;
  // Each (row, col) with row <= col is computed once and mirrored; cells are
  // disjoint so no synchronisation is needed.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t idx = 0; idx < pairs; ++idx) {
    const std::ptrdiff_t row = idx / k;
    const std::ptrdiff_t col = idx % k;
    if (row > col) continue;
    const auto i = static_cast<std::size_t>(row);
    const auto j = static_cast<std::size_t>(col);
    if (i == j) {
      m.at(i, i) = diagonal_cell(columns[i]);
    } else {
      const CorrelationCell cell = pearson(columns[i].values, columns[j].values);
      m.at(i, j) = cell;
      m.at(j, i) = cell;
    }
  }
  // A variable with fewer than two values invalidates its whole row/column.
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (count_usable(columns[i].values) >= 2) continue;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      for (auto* cell : {&m.at(i, j), &m.at(j, i)}) {
        cell->status = CorrelationStatus::insufficient_n;
        cell->r.reset();
        cell->p_value.reset();
      }
    }
  }
  return m;
}

Histogram histogram(std::span<const std::optional<double>> values,
                    const BinSpec& bins) {
  bins.validate();
  Histogram h;
  h.bins = bins;
  h.counts.assign(bins.bin_count(), 0);
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const auto k = static_cast<std::ptrdiff_t>(bins.bin_count());
#pragma omp parallel
  {
    std::vector<std::size_t> local(h.counts.size() + 2, 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (!usable(values[i])) continue;
      const std::ptrdiff_t b = locate(bins.edges, *values[i]);
      ++local[static_cast<std::size_t>(b + 1)];
    }
#pragma omp critical(engage_histogram_merge)
    {
      h.underflow += local.front();
      h.overflow += local.back();
      for (std::ptrdiff_t b = 0; b < k; ++b) {
        h.counts[static_cast<std::size_t>(b)] += local[static_cast<std::size_t>(b + 1)];
      }
    }
  }
  return h;
}

namespace serial {

CorrelationMatrix correlation_matrix(std::span<const NamedColumn> columns) {
  if (columns.empty()) return CorrelationMatrix{};
  check_equal_lengths(columns);
  std::vector<std::string> names;
  for (const auto& c : columns) names.push_back(c.name);
  CorrelationMatrix m(std::move(names));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const bool row_ok = count_usable(columns[i].values) >= 2;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const bool col_ok = count_usable(columns[j].values) >= 2;
      CorrelationCell cell = i == j ? diagonal_cell(columns[i])
                                    : pearson(columns[i].values, columns[j].values);
      if (!row_ok || !col_ok) {
        cell.status = CorrelationStatus::insufficient_n;
        cell.r.reset();
        cell.p_value.reset();
      }
      m.at(i, j) = cell;
    }
  }
  return m;
}

Histogram histogram(std::span<const std::optional<double>> values,
                    const BinSpec& bins) {
  bins.validate();
  Histogram h;
  h.bins = bins;
  h.counts.assign(bins.bin_count(), 0);
  for (const auto& v : values) {
    if (!usable(v)) continue;
    const std::ptrdiff_t b = locate(bins.edges, *v);
    if (b < 0) {
      ++h.underflow;
    } else if (b >= static_cast<std::ptrdiff_t>(h.counts.size())) {
      ++h.overflow;
    } else {
      ++h.counts[static_cast<std::size_t>(b)];
    }
  }
  return h;
}

}  // namespace serial

SampleKey views_key() {
  return {"views", [](const VideoStatsSnapshot& s) -> std::optional<double> {
            return static_cast<double>(s.views);
          }};
}

StudySample quartile_filter(const StudySample& sample, const SampleKey& key,
                            QuartileSet keep) {
  const auto& members = sample.snapshots();
  const std::size_t n = members.size();
  if (n == 0) return StudySample({}, sample.selection_note());

  std::vector<double> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = key.value(members[i]);
    if (!usable(v)) {
      throw std::invalid_argument("quartile key '" + key.name +
                                  "' undefined for video " + members[i].video_id);
    }
    keys[i] = *v;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return members[a].video_id < members[b].video_id;
  });

  std::vector<bool> retained(n, false);
  for (int q = 1; q <= 4; ++q) {
    if (!keep.contains(q)) continue;
    const std::size_t begin = static_cast<std::size_t>(q - 1) * n / 4;
    const std::size_t end = static_cast<std::size_t>(q) * n / 4;
    for (std::size_t rank = begin; rank < end; ++rank) retained[order[rank]] = true;
  }

  std::vector<VideoStatsSnapshot> out;
  std::string quartiles;
  for (int q = 1; q <= 4; ++q) {
    if (keep.contains(q)) quartiles += (quartiles.empty() ? "Q" : ",Q") + std::to_string(q);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (retained[i]) out.push_back(members[i]);
  }
  StudySample result(std::move(out), sample.selection_note());
  result.append_note("quartile filter on " + key.name + " kept " +
                     (quartiles.empty() ? "none" : quartiles) + " (" +
                     std::to_string(result.size()) + " of " + std::to_string(n) + ")");
  return result;
}

std::vector<CategoryCount> category_counts(const StudySample& sample) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : sample.snapshots()) ++counts[s.category];
  std::vector<CategoryCount> out;
  out.reserve(counts.size());
  for (const auto& [category, count] : counts) out.push_back({category, count});
  std::stable_sort(out.begin(), out.end(),
                   [](const CategoryCount& a, const CategoryCount& b) {
                     return a.count > b.count;
                   });
  return out;
}

}  // namespace engage
