#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace harmonica::heaps {

/// Probability density over geometric bins. densities[i] = count_i / (n * width_i),
/// so sum(density * width) = 1.
struct LogBinnedPMF {
  std::vector<double> bin_edges;  // size = bins + 1, strictly increasing
  std::vector<double> densities;
  std::vector<std::size_t> counts;
  std::size_t sample_count = 0;

  double width(std::size_t bin) const { return bin_edges[bin + 1] - bin_edges[bin]; }
  double center(std::size_t bin) const;  // geometric mean of the edges
};

/// Bins start at min(values) and grow by a factor 10^(1 / bins_per_decade)
/// until max(values) is covered. Throws Error(NonPositiveValue).
LogBinnedPMF log_binned_pmf(std::span<const double> values, int bins_per_decade = 5);

/// Continuous power law p(x) ~ x^-exponent for x >= xmin.
struct TailFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;  // (exponent - 1) / sqrt(n_tail)
  double xmin = 0.0;
  std::size_t n_tail = 0;
  double ks_stat = 0.0;
};

inline constexpr std::size_t kMinTailPoints = 10;

/// Maximum-likelihood exponent 1 + n / sum(ln(x / xmin)) over x >= xmin.
/// Without `xmin`, every observed value leaving at least kMinTailPoints in the
/// tail is tried and the one minimising the Kolmogorov-Smirnov distance wins.
/// Throws Error(NonPositiveValue) or Error(TooFewTailPoints).
TailFit fit_powerlaw_tail(std::span<const double> values, std::optional<double> xmin = std::nullopt);

}  // namespace harmonica::heaps
