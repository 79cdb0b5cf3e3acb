#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harmonica/corpus.hpp"

namespace harmonica::vocab {

/// Shannon entropy of the type distribution, in bits. Throws Error(EmptyTable).
double entropy(const corpus::FrequencyTable& table);

/// Token-weighted mean number of sounding pitch classes per codeword.
/// Throws Error(EmptyTable).
double mean_filling(const corpus::FrequencyTable& table);

/// V / L. Requires 1 <= V <= L.
double ttr(std::uint64_t tokens, std::uint64_t types);
/// V / sqrt(L). Requires 1 <= V <= L.
double guiraud(std::uint64_t tokens, std::uint64_t types);
/// log V / log L. Requires L >= 2 and 1 <= V <= L; V = 1 gives 0.
double herdan(std::uint64_t tokens, std::uint64_t types);

/// (birth + 20 + death) / 2: the midpoint of the productive life, assuming
/// composition starts at twenty. Throws Error(InvalidYears) unless birth < death.
double composer_year(int birth, int death);

/// Metric vector for one dataset. Values that are undefined for the dataset
/// (empty or single-token tables) are NaN; richness is filled in later by the
/// Heaps fit.
struct MetricsRow {
  std::string composer;
  double year = 0.0;
  std::size_t pieces = 0;
  std::uint64_t tokens = 0;  // L
  std::uint64_t types = 0;   // V
  double ttr = 0.0;
  double guiraud = 0.0;
  double herdan = 0.0;
  double entropy_bits = 0.0;
  double mean_filling = 0.0;
  std::optional<double> richness;
};

MetricsRow compute_metrics(const corpus::ComposerDataset& dataset);

/// composer,year,pieces,L,V,ttr,guiraud,herdan,entropy_bits,mean_filling,richness
/// NaN and missing values render as empty cells.
std::string format_metrics_csv(std::span<const MetricsRow> rows);

}  // namespace harmonica::vocab
