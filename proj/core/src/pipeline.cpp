#include "harmonica/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "harmonica/cache.hpp"
#include "harmonica/key.hpp"

namespace harmonica::pipeline {

namespace fs = std::filesystem;

std::string_view to_string(Level level) noexcept { return level == Level::Composer ? "composer" : "piece"; }

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

chroma::Chromagram encode_piece(const midi::PieceScore& score, const Rational& unit_beats, double threshold,
                                bool transpose) {
  auto cg = chroma::encode_score(score, unit_beats, threshold);
  if (cg.codewords.empty()) {
    // nothing to transpose: the piece contributes zero tokens either way
    cg.transposed = transpose;
    return cg;
  }
  std::optional<key::KeyEstimate> found;
  try {
    found = key::find_key(key::average_chroma(cg.codewords));
  } catch (const Error& e) {
    if (transpose || e.code() != Errc::ZeroVariance) throw;
  }
  if (transpose) return key::transpose(cg, *found);
  cg.key = found;
  return cg;
}

fs::path resolve_piece_path(const fs::path& manifest_path, const std::string& entry_path) {
  fs::path p(entry_path);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

std::string cache_variant(const RunConfig& config) { return config.drop_percussion ? "drop-percussion" : ""; }

std::size_t EncodeSummary::rejected_total() const noexcept {
  std::size_t total = 0;
  for (const auto& [reason, count] : rejected) total += count;
  return total;
}

bool EncodeSummary::failed_majority() const noexcept {
  const auto total = ok + rejected_total();
  return total > 0 && 2 * rejected_total() > total;
}

std::string EncodeSummary::summary_line() const {
  std::string line = std::to_string(ok) + " ok, " + std::to_string(rejected_total()) + " rejected";
  line += " (" + std::to_string(cache_hits) + " cache hits, " + std::to_string(parsed) + " parsed)";
  for (const auto& [reason, count] : rejected) line += "; " + reason + ": " + std::to_string(count);
  return line;
}

EncodeSummary encode_corpus(const RunConfig& config, std::ostream* log) {
  const auto entries = corpus::read_manifest(config.manifest_path.string());
  fs::create_directories(config.cache_dir);
  const auto variant = cache_variant(config);

  std::vector<PieceOutcome> outcomes(entries.size());
  parallel_for(entries.size(), config.jobs, [&](std::size_t i) {
    const auto& e = entries[i];
    auto& out = outcomes[i];
    out.path = e.path;
    const auto cache_file = cache::cache_path(config.cache_dir, e.path, variant);
    const cache::CacheKey want{e.path, config.unit_beats, config.threshold, config.transpose};

    if (fs::exists(cache_file)) {
      try {
        cache::read_cache(cache_file, want);
        out.ok = out.cache_hit = true;
        return;
      } catch (const Error&) {
        // stale or damaged: re-encode below
      }
    }
    try {
      auto score = midi::read_smf(resolve_piece_path(config.manifest_path, e.path).string(),
                                  {.drop_percussion = config.drop_percussion});
      score.source_id = e.path;
      if (score.dangling_notes > 0) {
        out.warnings.push_back(std::to_string(score.dangling_notes) + " dangling note-on(s) closed at end of track");
      }
      auto cg = encode_piece(score, config.unit_beats, config.threshold, config.transpose);
      if (cg.codewords.empty()) out.warnings.push_back("empty after trimming edge silence");
      cache::write_cache(cg, cache_file);
      out.ok = true;
    } catch (const Error& err) {
      out.error = err.code();
      out.message = err.what();
    } catch (const std::exception& err) {
      out.error = Errc::Io;
      out.message = err.what();
    }
  });

  EncodeSummary summary;
  for (auto& out : outcomes) {
    if (out.ok) {
      ++summary.ok;
      if (out.cache_hit) {
        ++summary.cache_hits;
      } else {
        ++summary.parsed;
      }
    } else {
      ++summary.rejected[std::string(to_string(*out.error))];
      if (out.error != Errc::Io) ++summary.parsed;
    }
    if (log) {
      for (const auto& w : out.warnings) *log << "warning: " << out.path << ": " << w << '\n';
      if (!out.ok) *log << "rejected: " << out.path << ": " << out.message << '\n';
    }
  }
  summary.pieces = std::move(outcomes);
  return summary;
}

LoadedCorpus load_cached_corpus(const RunConfig& config) {
  LoadedCorpus out;
  const auto entries = corpus::read_manifest(config.manifest_path.string());
  const auto variant = cache_variant(config);
  for (const auto& e : entries) {
    const auto file = cache::cache_path(config.cache_dir, e.path, variant);
    try {
      auto cg = cache::read_cache(file, {e.path, config.unit_beats, config.threshold, config.transpose});
      out.entries.push_back(e);
      out.chromagrams.push_back(std::move(cg));
    } catch (const Error&) {
      out.missing.push_back(e.path);
    }
  }
  return out;
}

namespace {

using MetricGetter = double (*)(const vocab::MetricsRow&);

const std::vector<std::pair<std::string, MetricGetter>>& trend_metrics() {
  static const std::vector<std::pair<std::string, MetricGetter>> metrics = {
      {"richness", [](const vocab::MetricsRow& r) { return r.richness ? *r.richness : NAN; }},
      {"entropy_bits", [](const vocab::MetricsRow& r) { return r.entropy_bits; }},
      {"mean_filling", [](const vocab::MetricsRow& r) { return r.mean_filling; }},
      {"ttr", [](const vocab::MetricsRow& r) { return r.ttr; }},
      {"guiraud", [](const vocab::MetricsRow& r) { return r.guiraud; }},
      {"herdan", [](const vocab::MetricsRow& r) { return r.herdan; }},
  };
  return metrics;
}

}  // namespace

AnalysisResult analyze(std::span<const corpus::ManifestEntry> entries, std::span<const chroma::Chromagram> chromagrams,
                       Level level) {
  if (entries.empty()) throw Error(Errc::EmptyCorpus, "no pieces to analyze");
  AnalysisResult res;
  res.level = level;
  res.datasets = level == Level::Composer ? corpus::aggregate(entries, chromagrams)
                                          : corpus::aggregate_pieces(entries, chromagrams);

  std::vector<heaps::Point> points;
  for (const auto& ds : res.datasets) {
    res.rows.push_back(vocab::compute_metrics(ds));
    points.push_back({static_cast<double>(ds.table.tokens()), static_cast<double>(ds.table.types())});
  }
  try {
    res.heaps = heaps::fit_heaps(points);
    heaps::fill_richness(res.rows, *res.heaps);
  } catch (const Error& e) {
    res.heaps_error = e.what();
    for (auto& r : res.rows) r.richness.reset();
  }

  for (const auto& [name, get] : trend_metrics()) {
    std::vector<double> xs, ys;
    for (const auto& r : res.rows) {
      const double y = get(r);
      if (!std::isfinite(y)) continue;
      xs.push_back(r.year);
      ys.push_back(y);
    }
    try {
      res.trends.emplace(name, heaps::fit_trend(xs, ys));
    } catch (const Error& e) {
      res.trend_errors.emplace(name, e.what());
    }
  }

  try {
    for (auto method : {heaps::CorrelationMethod::Pearson, heaps::CorrelationMethod::Spearman,
                        heaps::CorrelationMethod::Kendall}) {
      res.correlations.push_back(heaps::metrics_correlation(res.rows, method));
    }
  } catch (const Error& e) {
    res.correlations.clear();
    res.correlation_error = e.what();
  }

  corpus::FrequencyTable all;
  for (const auto& cg : chromagrams) {
    if (cg.codewords.empty()) continue;
    corpus::FrequencyTable t;
    t.add(cg.codewords);
    res.piece_lengths.push_back(static_cast<double>(t.tokens()));
    res.piece_types.push_back(static_cast<double>(t.types()));
    all.merge(t);
  }
  auto ranked = all.ranked();
  if (ranked.size() > 10) ranked.resize(10);
  res.top_codewords = std::move(ranked);

  if (!res.piece_lengths.empty()) {
    res.pmf_length = heaps::log_binned_pmf(res.piece_lengths);
    res.pmf_types = heaps::log_binned_pmf(res.piece_types);
    try {
      res.tail = heaps::fit_powerlaw_tail(res.piece_lengths);
    } catch (const Error& e) {
      res.tail_error = e.what();
    }
  } else {
    res.tail_error = "no nonempty pieces";
  }
  return res;
}

std::vector<double> default_sweep_thresholds() { return {0.0, 0.025, 0.05, 0.1, 0.2, 0.3, 0.5}; }

std::vector<Rational> default_sweep_units() { return {Rational(1, 2), Rational(1, 1), Rational(3, 2), Rational(4, 1)}; }

std::vector<SweepCell> sweep(std::span<const corpus::ManifestEntry> entries, std::span<const midi::PieceScore> scores,
                             std::span<const double> thresholds, std::span<const Rational> units, bool transpose,
                             Level level, unsigned jobs) {
  if (entries.size() != scores.size()) throw Error(Errc::InvalidSpec, "entries and scores differ in length");
  std::vector<SweepCell> cells;
  for (const auto& unit : units) {
    for (double threshold : thresholds) {
      SweepCell cell{threshold, unit, std::nullopt, {}};
      std::vector<std::optional<chroma::Chromagram>> encoded(scores.size());
      parallel_for(scores.size(), jobs, [&](std::size_t i) {
        try {
          encoded[i] = encode_piece(scores[i], unit, threshold, transpose);
        } catch (const Error&) {
          // rejected in this cell
        }
      });
      std::vector<corpus::ManifestEntry> kept_entries;
      std::vector<chroma::Chromagram> kept;
      for (std::size_t i = 0; i < encoded.size(); ++i) {
        if (!encoded[i]) continue;
        kept_entries.push_back(entries[i]);
        kept.push_back(std::move(*encoded[i]));
      }
      try {
        const auto datasets = level == Level::Composer ? corpus::aggregate(kept_entries, kept)
                                                       : corpus::aggregate_pieces(kept_entries, kept);
        std::vector<heaps::Point> points;
        for (const auto& ds : datasets) {
          points.push_back({static_cast<double>(ds.table.tokens()), static_cast<double>(ds.table.types())});
        }
        cell.fit = heaps::fit_heaps(points);
      } catch (const Error& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string format_sweep_csv(std::span<const SweepCell> cells) {
  std::string out = "threshold,unit,alpha,log10K,rho\n";
  for (const auto& c : cells) {
    out += format_double(c.threshold) + ',' + c.unit_beats.str() + ',';
    if (c.fit) {
      out += format_double(c.fit->alpha) + ',' + format_double(c.fit->log10K) + ',' + format_double(c.fit->rho);
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

std::string format_key_histogram_csv(const std::array<std::size_t, 24>& counts) {
  std::string out = "key_index,key,count\n";
  for (int i = 0; i < 24; ++i) {
    out += std::to_string(i) + ',' + key::KeyEstimate::from_index(i).name() + ',' +
           std::to_string(counts[static_cast<std::size_t>(i)]) + '\n';
  }
  return out;
}

void write_zipf_corpus(const synth::ZipfSpec& spec, int composers, const fs::path& cache_dir,
                       const fs::path& manifest_path) {
  if (composers < 1) throw Error(Errc::InvalidSpec, "need at least one composer");
  const auto pieces = synth::sample_corpus(spec);
  std::string manifest = "path,composer,birth,death\n";
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(composers));
    char path[64], name[32];
    std::snprintf(path, sizeof path, "zipf/piece_%05zu.mid", i + 1);
    std::snprintf(name, sizeof name, "Zipf %02d", c + 1);
    const int birth = 1400 + 10 * c;
    manifest += std::string(path) + ',' + name + ',' + std::to_string(birth) + ',' + std::to_string(birth + 60) + '\n';

    chroma::Chromagram cg;
    cg.source_id = path;
    cg.codewords = chroma::trim_edge_silence(pieces[i]);
    cg.unit_beats = Rational(1, 1);
    cg.threshold = 0.1;
    cg.transposed = true;
    cache::write_cache(cg, cache::cache_path(cache_dir, path));
  }
  if (manifest_path.has_parent_path()) fs::create_directories(manifest_path.parent_path());
  std::ofstream(manifest_path, std::ios::binary) << manifest;
}

fs::path write_midi_corpus(const synth::MidiCorpusSpec& spec, const fs::path& dir) {
  const auto pieces = synth::synth_midi_corpus(spec);
  std::string manifest = "path,composer,birth,death\n";
  for (const auto& p : pieces) {
    const auto file = dir / p.entry.path;
    fs::create_directories(file.parent_path());
    const auto bytes = synth::write_midi_fixture(p.fixture);
    std::ofstream out(file, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::Io, "cannot write " + file.string());
    manifest += corpus::csv_field(p.entry.path) + ',' + corpus::csv_field(p.entry.composer) + ',' +
                std::to_string(p.entry.birth) + ',' + std::to_string(p.entry.death) + '\n';
  }
  const auto manifest_path = dir / "manifest.csv";
  std::ofstream(manifest_path, std::ios::binary) << manifest;
  return manifest_path;
}

}  // namespace harmonica::pipeline
