#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "harmonica/vocab.hpp"

namespace harmonica::heaps {

struct Point {
  double tokens = 0;  // L
  double types = 0;   // V
};

/// Least-squares line log10 V = log10K + alpha * log10 L.
///
/// All spreads are population (divide-by-n) statistics, so sigma_c is both
/// the residual standard deviation and sigma_y * sqrt(1 - rho^2).
struct HeapsFit {
  double alpha = 0.0;
  double log10K = 0.0;
  double rho = 0.0;
  double sigma_y = 0.0;
  double sigma_c = 0.0;
  double alpha_stderr = 0.0;  // OLS standard error of the slope (n - 2 dof)
  std::size_t n_points = 0;
  std::size_t excluded = 0;  // points dropped for L = 0 or V = 0
};

/// Points with L or V equal to zero are excluded and counted. Throws
/// Error(TooFewPoints) below three usable points, Error(DegenerateX) when all
/// L coincide.
HeapsFit fit_heaps(std::span<const Point> points);

/// Relative richness: the residual of log10 V from the fitted line, in units
/// of sigma_c. Throws Error(ZeroSigmaC) for a perfectly collinear fit.
double richness(double types, double tokens, const HeapsFit& fit);

/// Fills `richness` on every row with L, V >= 1.
void fill_richness(std::span<vocab::MetricsRow> rows, const HeapsFit& fit);

struct TrendFit {
  double slope_per_century = 0.0;
  double intercept = 0.0;  // value at year 0
  double rho = 0.0;        // 0 when the metric is constant
  double slope_stderr_per_century = 0.0;
  std::size_t n_points = 0;
};

/// Ordinary least squares of `ys` on `xs` (years). Throws Error(TooFewPoints)
/// for n < 3 and Error(DegenerateX) when all years coincide.
TrendFit fit_trend(std::span<const double> xs, std::span<const double> ys);

}  // namespace harmonica::heaps
