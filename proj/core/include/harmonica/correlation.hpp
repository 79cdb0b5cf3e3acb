#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harmonica/vocab.hpp"

namespace harmonica::heaps {

enum class CorrelationMethod { Pearson, Spearman, Kendall };

std::string_view to_string(CorrelationMethod method) noexcept;

struct Correlation {
  double value = 0.0;
  bool degenerate = false;  // a column was constant; value reported as 0
};

Correlation pearson(std::span<const double> x, std::span<const double> y);
/// Pearson on average ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);
/// Kendall tau-b, O(n log n) (Knight's merge-sort algorithm).
Correlation kendall(std::span<const double> x, std::span<const double> y);
Correlation correlate(std::span<const double> x, std::span<const double> y, CorrelationMethod method);

/// Average ranks, 1-based; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  CorrelationMethod method = CorrelationMethod::Pearson;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bool>> degenerate;
  std::size_t n_rows = 0;
};

/// Columns must have equal length >= 3. Throws Error(TooFewPoints).
CorrelationMatrix correlation_matrix(std::span<const std::vector<double>> columns,
                                     std::vector<std::string> labels, CorrelationMethod method);

/// Metric columns in fixed order: year, log10_L, log10_V, ttr, guiraud, herdan,
/// entropy_bits, mean_filling, richness. Rows with any undefined metric are
/// left out; the richness column is dropped when no row carries it.
CorrelationMatrix metrics_correlation(std::span<const vocab::MetricsRow> rows, CorrelationMethod method);

}  // namespace harmonica::heaps
