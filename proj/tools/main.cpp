// harmonica: MIDI corpus -> harmonic codewords -> vocabulary richness reports.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "harmonica/cache.hpp"
#include "harmonica/key.hpp"
#include "harmonica/pipeline.hpp"

namespace fs = std::filesystem;
using namespace harmonica;

namespace {

struct Options {
  std::string unit = "1";
  double threshold = 0.1;
  bool no_transpose = false;
  bool drop_percussion = false;
  std::string level = "composer";
  std::string cache;
  std::string manifest;
  std::string out;
  unsigned jobs = 0;
};

void add_encoding_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--unit", o.unit, "Frame length in beats (e.g. 1, 0.5, 3/2)")->capture_default_str();
  cmd->add_option("--threshold", o.threshold, "Discretization threshold in [0, 1)")
      ->check(CLI::Range(0.0, 0.999999))
      ->capture_default_str();
  cmd->add_flag("--no-transpose", o.no_transpose, "Keep pieces in their original key");
  cmd->add_flag("--drop-percussion", o.drop_percussion, "Ignore MIDI channel 10");
}

void add_cache_flag(CLI::App* cmd, Options& o, bool required) {
  auto* opt = cmd->add_option("--cache", o.cache, "Chromagram cache directory")->envname("HARMONICA_CACHE");
  if (required) opt->required();
}

pipeline::RunConfig to_config(const Options& o) {
  pipeline::RunConfig c;
  c.unit_beats = Rational::parse(o.unit);
  c.threshold = o.threshold;
  c.transpose = !o.no_transpose;
  c.drop_percussion = o.drop_percussion;
  c.cache_dir = o.cache;
  c.manifest_path = o.manifest;
  c.output_dir = o.out;
  c.level = o.level == "piece" ? pipeline::Level::Piece : pipeline::Level::Composer;
  c.jobs = o.jobs;
  return c;
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

int run_encode(const Options& o) {
  const auto config = to_config(o);
  const auto summary = pipeline::encode_corpus(config, &std::cerr);
  std::cout << summary.summary_line() << '\n';
  return summary.failed_majority() ? 2 : 0;
}

int run_analyze(const Options& o) {
  const auto config = to_config(o);
  const auto loaded = pipeline::load_cached_corpus(config);
  for (const auto& m : loaded.missing) std::cerr << "warning: no usable cache entry for " << m << '\n';
  const auto result = pipeline::analyze(loaded.entries, loaded.chromagrams, config.level);
  if (!result.heaps) std::cerr << "warning: Heaps fit refused: " << result.heaps_error << '\n';
  pipeline::write_analysis(result, config, config.output_dir);
  std::cout << "analyzed " << loaded.entries.size() << " pieces into " << result.datasets.size() << " datasets";
  if (result.heaps) std::cout << "; alpha = " << pipeline::format_double(result.heaps->alpha);
  std::cout << '\n';
  return 0;
}

int run_sweep(const Options& o, const std::vector<double>& thresholds, const std::vector<std::string>& unit_text) {
  const auto config = to_config(o);
  const auto entries = corpus::read_manifest(config.manifest_path.string());
  std::vector<Rational> units;
  for (const auto& u : unit_text) units.push_back(Rational::parse(u));

  std::vector<std::optional<midi::PieceScore>> parsed(entries.size());
  pipeline::parallel_for(entries.size(), config.jobs, [&](std::size_t i) {
    try {
      parsed[i] = midi::read_smf(pipeline::resolve_piece_path(config.manifest_path, entries[i].path).string(),
                                 {.drop_percussion = config.drop_percussion});
      parsed[i]->source_id = entries[i].path;
    } catch (const Error& e) {
      std::cerr << "rejected: " << entries[i].path << ": " << e.what() << '\n';
    }
  });
  std::vector<corpus::ManifestEntry> kept;
  std::vector<midi::PieceScore> scores;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!parsed[i]) continue;
    kept.push_back(entries[i]);
    scores.push_back(std::move(*parsed[i]));
  }
  if (scores.empty()) throw Error(Errc::EmptyCorpus, "no parsable pieces");

  const auto cells = pipeline::sweep(kept, scores, thresholds, units, config.transpose, config.level, config.jobs);
  write_or_print(o.out.empty() ? "" : (fs::path(o.out) / "sweep.csv").string(), pipeline::format_sweep_csv(cells));
  return 0;
}

int run_keys(const Options& o) {
  const auto config = to_config(o);
  const auto loaded = pipeline::load_cached_corpus(config);
  for (const auto& m : loaded.missing) std::cerr << "warning: no usable cache entry for " << m << '\n';
  std::vector<key::KeyEstimate> keys;
  for (const auto& cg : loaded.chromagrams) {
    if (cg.key) keys.push_back(*cg.key);
  }
  write_or_print(o.out, pipeline::format_key_histogram_csv(key::key_histogram(keys)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonica: harmonic vocabulary statistics for MIDI corpora"};
  app.require_subcommand(1);
  Options o;

  auto* encode = app.add_subcommand("encode", "Parse, encode, key-normalize and cache every manifest entry");
  encode->add_option("--manifest", o.manifest, "Manifest CSV (path,composer,birth,death)")->required();
  add_cache_flag(encode, o, true);
  add_encoding_flags(encode, o);
  encode->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");

  auto* analyze = app.add_subcommand("analyze", "Aggregate cached pieces and write metrics, report and plot data");
  analyze->add_option("--manifest", o.manifest, "Manifest CSV")->required();
  add_cache_flag(analyze, o, true);
  analyze->add_option("--out", o.out, "Output directory")->required();
  analyze->add_option("--level", o.level, "Dataset granularity")
      ->check(CLI::IsMember({"composer", "piece"}))
      ->capture_default_str();
  add_encoding_flags(analyze, o);

  std::vector<double> thresholds = pipeline::default_sweep_thresholds();
  std::vector<std::string> units = {"0.5", "1", "1.5", "4"};
  auto* sweep = app.add_subcommand("sweep", "Refit Heaps' law over a grid of thresholds and time units");
  sweep->add_option("--manifest", o.manifest, "Manifest CSV")->required();
  sweep->add_option("--out", o.out, "Output directory for sweep.csv (stdout if omitted)");
  sweep->add_option("--thresholds", thresholds, "Thresholds to try")->delimiter(',')->capture_default_str();
  sweep->add_option("--units", units, "Time units in beats")->delimiter(',')->capture_default_str();
  sweep->add_option("--level", o.level, "Dataset granularity")
      ->check(CLI::IsMember({"composer", "piece"}))
      ->capture_default_str();
  sweep->add_flag("--no-transpose", o.no_transpose, "Keep pieces in their original key");
  sweep->add_flag("--drop-percussion", o.drop_percussion, "Ignore MIDI channel 10");
  sweep->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");

  std::string kind = "zipf";
  synth::ZipfSpec zipf;
  std::size_t zipf_pieces = 200;
  double min_length = 100, max_length = 100000;
  int zipf_composers = 20;
  synth::MidiCorpusSpec midi_spec;
  std::uint64_t seed = 1;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--kind", kind, "zipf: cached token streams; midi: .mid files + manifest")
      ->check(CLI::IsMember({"zipf", "midi"}))
      ->capture_default_str();
  synth_cmd->add_option("--seed", seed, "Random seed (" + std::string(synth::kGeneratorName) + ")")
      ->capture_default_str();
  synth_cmd->add_option("--gamma", zipf.gamma, "Zipf rank exponent (zipf)")->capture_default_str();
  synth_cmd->add_option("--vocab", zipf.vocab_size, "Vocabulary size (zipf)")->capture_default_str();
  synth_cmd->add_option("--pieces", zipf_pieces, "Number of pieces (zipf)")->capture_default_str();
  synth_cmd->add_option("--min-length", min_length, "Shortest piece in tokens (zipf)")->capture_default_str();
  synth_cmd->add_option("--max-length", max_length, "Longest piece in tokens (zipf)")->capture_default_str();
  synth_cmd->add_option("--composers", zipf_composers, "Number of composers")->capture_default_str();
  add_cache_flag(synth_cmd, o, false);
  synth_cmd->add_option("--manifest", o.manifest, "Manifest to write (zipf)");
  synth_cmd->add_option("--out", o.out, "Directory for .mid files (midi)");

  auto* keys = app.add_subcommand("keys", "Histogram of detected keys over cached pieces");
  keys->add_option("--manifest", o.manifest, "Manifest CSV")->required();
  add_cache_flag(keys, o, true);
  keys->add_option("--out", o.out, "CSV file (stdout if omitted)");
  add_encoding_flags(keys, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode) return run_encode(o);
    if (*analyze) return run_analyze(o);
    if (*sweep) return run_sweep(o, thresholds, units);
    if (*keys) return run_keys(o);
    if (*synth_cmd) {
      if (kind == "zipf") {
        if (o.cache.empty() || o.manifest.empty()) throw CLI::ValidationError("synth zipf needs --cache and --manifest");
        zipf.seed = seed;
        zipf.piece_lengths = synth::log_uniform_lengths(zipf_pieces, min_length, max_length, seed);
        pipeline::write_zipf_corpus(zipf, zipf_composers, o.cache, o.manifest);
        std::cout << "wrote " << zipf_pieces << " synthetic pieces (" << synth::kGeneratorName << ", seed " << seed
                  << ")\n";
      } else {
        if (o.out.empty()) throw CLI::ValidationError("synth midi needs --out");
        midi_spec.seed = seed;
        midi_spec.composers = zipf_composers;
        const auto manifest = pipeline::write_midi_corpus(midi_spec, o.out);
        std::cout << "wrote " << manifest.string() << " (" << synth::kGeneratorName << ", seed " << seed << ")\n";
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
