#include "harmonica/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "harmonica/error.hpp"

namespace harmonica::heaps {

namespace {

void require_positive(std::span<const double> values) {
  for (double v : values) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw Error(Errc::NonPositiveValue, "values must be positive and finite");
    }
  }
}

// KS distance between the empirical CDF of sorted `tail` and the fitted law.
double ks_distance(std::span<const double> tail, double xmin, double exponent) {
  const auto n = static_cast<double>(tail.size());
  double d = 0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double model = 1.0 - std::pow(tail[i] / xmin, 1.0 - exponent);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::fabs(model - lo), std::fabs(hi - model)});
  }
  return d;
}

}  // namespace

double LogBinnedPMF::center(std::size_t bin) const {
  return std::sqrt(bin_edges[bin] * bin_edges[bin + 1]);
}

LogBinnedPMF log_binned_pmf(std::span<const double> values, int bins_per_decade) {
  if (bins_per_decade < 1) throw Error(Errc::InvalidSpec, "bins_per_decade must be >= 1");
  if (values.empty()) throw Error(Errc::TooFewPoints, "no values to bin");
  require_positive(values);

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double step = 1.0 / bins_per_decade;
  const auto position = [&](double v) { return std::log10(v / lo) / step; };

  auto bins = static_cast<std::size_t>(std::floor(position(hi))) + 1;
  LogBinnedPMF pmf;
  pmf.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    pmf.bin_edges[i] = lo * std::pow(10.0, static_cast<double>(i) * step);
  }
  pmf.bin_edges.front() = lo;
  // the closing edge must lie strictly above the maximum
  while (!(pmf.bin_edges.back() > hi)) {
    pmf.bin_edges.push_back(lo * std::pow(10.0, static_cast<double>(bins + 1) * step));
    ++bins;
  }

  pmf.counts.assign(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::max(0.0, std::floor(position(v))));
    idx = std::min(idx, bins - 1);
    // rounding in log10 may land one bin off near an edge
    while (idx > 0 && v < pmf.bin_edges[idx]) --idx;
    while (idx + 1 < bins && v >= pmf.bin_edges[idx + 1]) ++idx;
    ++pmf.counts[idx];
  }

  pmf.sample_count = values.size();
  pmf.densities.resize(bins);
  const auto n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < bins; ++i) {
    pmf.densities[i] = static_cast<double>(pmf.counts[i]) / (n * pmf.width(i));
  }
  return pmf;
}

TailFit fit_powerlaw_tail(std::span<const double> values, std::optional<double> xmin) {
  require_positive(values);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  if (xmin) {
    if (!(*xmin > 0)) throw Error(Errc::NonPositiveValue, "xmin must be positive");
    auto first = std::lower_bound(sorted.begin(), sorted.end(), *xmin);
    const std::span<const double> tail(first, sorted.end());
    if (tail.size() < kMinTailPoints) {
      throw Error(Errc::TooFewTailPoints, std::to_string(tail.size()) + " values at or above xmin");
    }
    double log_sum = 0;
    for (double v : tail) log_sum += std::log(v / *xmin);
    if (!(log_sum > 0)) throw Error(Errc::TooFewTailPoints, "tail has no spread above xmin");
    TailFit fit;
    fit.xmin = *xmin;
    fit.n_tail = tail.size();
    fit.exponent = 1.0 + static_cast<double>(tail.size()) / log_sum;
    fit.exponent_stderr = (fit.exponent - 1.0) / std::sqrt(static_cast<double>(tail.size()));
    fit.ks_stat = ks_distance(tail, fit.xmin, fit.exponent);
    return fit;
  }

  if (sorted.size() < kMinTailPoints) {
    throw Error(Errc::TooFewTailPoints, "fewer than " + std::to_string(kMinTailPoints) + " values");
  }
  // suffix sums of ln(x) give each candidate's MLE in O(1)
  std::vector<double> suffix_log(sorted.size() + 1, 0.0);
  for (std::size_t i = sorted.size(); i-- > 0;) suffix_log[i] = suffix_log[i + 1] + std::log(sorted[i]);

  std::optional<TailFit> best;
  for (std::size_t i = 0; i + kMinTailPoints <= sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    const double cut = sorted[i];
    const std::size_t n_tail = sorted.size() - i;
    const double log_sum = suffix_log[i] - static_cast<double>(n_tail) * std::log(cut);
    if (!(log_sum > 0)) continue;
    const double exponent = 1.0 + static_cast<double>(n_tail) / log_sum;
    const double d = ks_distance(std::span<const double>(sorted).subspan(i), cut, exponent);
    if (!best || d < best->ks_stat) {
      best = TailFit{exponent, (exponent - 1.0) / std::sqrt(static_cast<double>(n_tail)), cut, n_tail, d};
    }
  }
  if (!best) throw Error(Errc::TooFewTailPoints, "no cutoff leaves a usable tail");
  return *best;
}

}  // namespace harmonica::heaps
