#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harmonica/chroma.hpp"
#include "harmonica/correlation.hpp"
#include "harmonica/corpus.hpp"
#include "harmonica/distribution.hpp"
#include "harmonica/error.hpp"
#include "harmonica/heaps.hpp"
#include "harmonica/midi.hpp"
#include "harmonica/synth.hpp"
#include "harmonica/vocab.hpp"

namespace harmonica::pipeline {

enum class Level { Composer, Piece };

std::string_view to_string(Level level) noexcept;

struct RunConfig {
  Rational unit_beats{1, 1};
  double threshold = 0.1;
  bool transpose = true;
  bool drop_percussion = false;
  std::filesystem::path cache_dir;
  std::filesystem::path manifest_path;
  std::filesystem::path output_dir;
  Level level = Level::Composer;
  unsigned jobs = 0;  // 0 = hardware concurrency
};

/// Runs fn(i) for i in [0, n) on `jobs` worker threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// Frames, chromatizes, discretizes and trims a parsed score, then finds its
/// key. With `transpose`, the codewords are rotated to C major / A minor and a
/// piece whose key is undefined (ZeroVariance) is rejected by throwing. A
/// piece that is empty after trimming carries no key and passes as transposed.
chroma::Chromagram encode_piece(const midi::PieceScore& score, const Rational& unit_beats, double threshold,
                                bool transpose);

/// Manifest paths are relative to the manifest's directory unless absolute.
std::filesystem::path resolve_piece_path(const std::filesystem::path& manifest_path, const std::string& entry_path);

/// Variant tag hashed into cache file names for parameters the header lacks.
std::string cache_variant(const RunConfig& config);

struct PieceOutcome {
  std::string path;
  bool ok = false;
  bool cache_hit = false;
  std::optional<Errc> error;
  std::string message;
  std::vector<std::string> warnings;
};

struct EncodeSummary {
  std::size_t ok = 0;
  std::size_t cache_hits = 0;
  std::size_t parsed = 0;
  std::map<std::string, std::size_t> rejected;  // reason -> count
  std::vector<PieceOutcome> pieces;

  std::size_t rejected_total() const noexcept;
  /// True when more than half of the files failed.
  bool failed_majority() const noexcept;
  std::string summary_line() const;
};

/// Populates the cache for every manifest entry. Per-file failures are
/// recorded, never thrown.
EncodeSummary encode_corpus(const RunConfig& config, std::ostream* log = nullptr);

struct LoadedCorpus {
  std::vector<corpus::ManifestEntry> entries;
  std::vector<chroma::Chromagram> chromagrams;
  std::vector<std::string> missing;  // manifest paths without a usable cache file
};

/// Reads every cached chromagram matching the config. Missing or stale
/// entries are listed, not fatal.
LoadedCorpus load_cached_corpus(const RunConfig& config);

struct AnalysisResult {
  Level level = Level::Composer;
  std::vector<corpus::ComposerDataset> datasets;
  std::vector<vocab::MetricsRow> rows;
  std::optional<heaps::HeapsFit> heaps;
  std::string heaps_error;
  std::map<std::string, heaps::TrendFit> trends;
  std::map<std::string, std::string> trend_errors;
  std::vector<heaps::CorrelationMatrix> correlations;
  std::string correlation_error;
  std::vector<double> piece_lengths;  // L per nonempty piece
  std::vector<double> piece_types;    // V per nonempty piece
  std::optional<heaps::LogBinnedPMF> pmf_length;
  std::optional<heaps::LogBinnedPMF> pmf_types;
  std::optional<heaps::TailFit> tail;
  std::string tail_error;
  std::vector<std::pair<chroma::Codeword, std::uint64_t>> top_codewords;
};

/// Aggregation, Heaps fit, richness, metrics, trends, correlation matrices,
/// distributions and tail fit. Throws Error(EmptyCorpus) without pieces.
AnalysisResult analyze(std::span<const corpus::ManifestEntry> entries,
                       std::span<const chroma::Chromagram> chromagrams, Level level);

/// Writes metrics.csv, aggregate.csv, report.json and the plot TSVs.
void write_analysis(const AnalysisResult& result, const RunConfig& config, const std::filesystem::path& out_dir);

/// The analysis report as JSON text (deterministic).
std::string format_report_json(const AnalysisResult& result, const RunConfig& config);

struct SweepCell {
  double threshold = 0.1;
  Rational unit_beats;
  std::optional<heaps::HeapsFit> fit;
  std::string error;
};

std::vector<double> default_sweep_thresholds();
std::vector<Rational> default_sweep_units();

/// Re-encodes every parsed score at each (threshold, unit) and refits Heaps'
/// law. Pieces rejected in a cell are left out of that cell's fit.
std::vector<SweepCell> sweep(std::span<const corpus::ManifestEntry> entries, std::span<const midi::PieceScore> scores,
                             std::span<const double> thresholds, std::span<const Rational> units, bool transpose,
                             Level level, unsigned jobs = 1);

/// threshold,unit,alpha,log10K,rho
std::string format_sweep_csv(std::span<const SweepCell> cells);

/// key_index,key,count
std::string format_key_histogram_csv(const std::array<std::size_t, 24>& counts);

/// Writes one cache file per synthetic Zipf piece plus a manifest pointing at
/// virtual paths. Pieces are split round-robin over `composers`.
void write_zipf_corpus(const synth::ZipfSpec& spec, int composers, const std::filesystem::path& cache_dir,
                       const std::filesystem::path& manifest_path);

/// Writes .mid files under `dir` plus `dir/manifest.csv`; returns the manifest path.
std::filesystem::path write_midi_corpus(const synth::MidiCorpusSpec& spec, const std::filesystem::path& dir);

std::string format_double(double v);

}  // namespace harmonica::pipeline
