#include "harmonica/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "harmonica/error.hpp"

namespace harmonica::heaps {

namespace {

void require_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::InvalidSpec, "correlation inputs differ in length");
  if (x.size() < 2) throw Error(Errc::TooFewPoints, "correlation needs at least 2 points");
}

std::int64_t tie_pairs(std::span<const double> sorted) {
  std::int64_t total = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    total += t * (t - 1) / 2;
    i = j;
  }
  return total;
}

// Stable merge sort of `v` counting pairs (i < j) with v[i] > v[j].
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo,
                              std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_inversions(v, scratch, lo, mid) + count_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

std::string_view to_string(CorrelationMethod method) noexcept {
  switch (method) {
    case CorrelationMethod::Pearson: return "pearson";
    case CorrelationMethod::Spearman: return "spearman";
    case CorrelationMethod::Kendall: return "kendall";
  }
  return "unknown";
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0) || !(syy > 0)) return {0.0, true};
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

Correlation kendall(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }

  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t ties_x = tie_pairs(xs);
  std::int64_t ties_xy = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i + 1;
      while (j < n && xs[j] == xs[i] && ys[j] == ys[i]) ++j;
      const auto t = static_cast<std::int64_t>(j - i);
      ties_xy += t * (t - 1) / 2;
      i = j;
    }
  }
  std::vector<double> scratch(n);
  const std::int64_t swaps = count_inversions(ys, scratch, 0, n);  // leaves ys sorted
  const std::int64_t ties_y = tie_pairs(ys);

  const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) * std::sqrt(static_cast<double>(n0 - ties_y));
  if (!(denom > 0)) return {0.0, true};
  const auto numer = static_cast<double>(n0 - ties_x - ties_y + ties_xy - 2 * swaps);
  return {std::clamp(numer / denom, -1.0, 1.0), false};
}

Correlation correlate(std::span<const double> x, std::span<const double> y, CorrelationMethod method) {
  switch (method) {
    case CorrelationMethod::Pearson: return pearson(x, y);
    case CorrelationMethod::Spearman: return spearman(x, y);
    case CorrelationMethod::Kendall: return kendall(x, y);
  }
  return pearson(x, y);
}

CorrelationMatrix correlation_matrix(std::span<const std::vector<double>> columns,
                                     std::vector<std::string> labels, CorrelationMethod method) {
  if (columns.size() != labels.size()) throw Error(Errc::InvalidSpec, "labels and columns differ");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != n) throw Error(Errc::InvalidSpec, "columns differ in length");
  }
  if (n < 3) throw Error(Errc::TooFewPoints, "correlation matrix needs at least 3 rows");

  CorrelationMatrix m;
  m.labels = std::move(labels);
  m.method = method;
  m.n_rows = n;
  const std::size_t k = columns.size();
  m.values.assign(k, std::vector<double>(k, 0.0));
  m.degenerate.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i) {
    const auto self = correlate(columns[i], columns[i], method);
    m.values[i][i] = 1.0;
    m.degenerate[i][i] = self.degenerate;
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto c = correlate(columns[i], columns[j], method);
      m.values[i][j] = m.values[j][i] = c.value;
      m.degenerate[i][j] = m.degenerate[j][i] = c.degenerate;
    }
  }
  return m;
}

CorrelationMatrix metrics_correlation(std::span<const vocab::MetricsRow> rows, CorrelationMethod method) {
  const bool with_richness = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.richness.has_value(); });
  std::vector<std::string> labels = {"year", "log10_L", "log10_V", "ttr", "guiraud", "herdan", "entropy_bits", "mean_filling"};
  if (with_richness) labels.emplace_back("richness");

  std::vector<std::vector<double>> columns(labels.size());
  for (const auto& r : rows) {
    std::vector<double> v = {r.year,
                             r.tokens > 0 ? std::log10(static_cast<double>(r.tokens)) : NAN,
                             r.types > 0 ? std::log10(static_cast<double>(r.types)) : NAN,
                             r.ttr,
                             r.guiraud,
                             r.herdan,
                             r.entropy_bits,
                             r.mean_filling};
    if (with_richness) v.push_back(r.richness ? *r.richness : NAN);
    if (!std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); })) continue;
    for (std::size_t i = 0; i < v.size(); ++i) columns[i].push_back(v[i]);
  }
  return correlation_matrix(columns, std::move(labels), method);
}

}  // namespace harmonica::heaps
