#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "harmonica/chroma.hpp"
#include "harmonica/corpus.hpp"
#include "harmonica/midi.hpp"

namespace harmonica::synth {

/// Name of the generator behind every random stream in this module; written
/// into report headers so runs can be reproduced elsewhere.
inline constexpr std::string_view kGeneratorName = "mt19937_64+splitmix64";

/// Seed for item `index` of a stream seeded with `seed` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng) noexcept;

struct ZipfSpec {
  double gamma = 2.0;                       // rank exponent, > 1
  int vocab_size = chroma::kCodewordCount;  // <= 4096
  std::vector<std::size_t> piece_lengths;
  std::uint64_t seed = 1;
};

/// Cumulative Zipf table: p_r proportional to r^-gamma, r = 1..vocab_size.
class ZipfSampler {
 public:
  ZipfSampler(double gamma, int vocab_size);

  /// Rank in [1, vocab_size].
  int sample(std::mt19937_64& rng) const;
  double probability(int rank) const;
  int vocab_size() const noexcept { return static_cast<int>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
};

/// Rank r maps to codeword id r mod 4096: the empty codeword is the rarest
/// type, so synthetic streams rarely carry edge silence.
chroma::Codeword rank_codeword(int rank) noexcept;

/// One token stream per entry of spec.piece_lengths. Deterministic in the
/// seed; pieces draw from independent derived seeds. Throws Error(BadGamma).
std::vector<std::vector<chroma::Codeword>> sample_corpus(const ZipfSpec& spec);

/// `count` integers log-uniform in [lo, hi].
std::vector<std::size_t> log_uniform_lengths(std::size_t count, double lo, double hi, std::uint64_t seed);

struct FixtureNote {
  int pitch = 60;
  double onset_beats = 0.0;
  double duration_beats = 1.0;
  int channel = 0;
};

/// Beats follow the signature denominator, as in the frame grid.
struct FixtureSpec {
  int ticks_per_quarter = 480;
  int numerator = 4;
  int denominator = 4;
  std::vector<FixtureNote> notes;
};

/// Format-0 SMF with one time-signature event and the given notes. Throws
/// Error(UnrepresentableDuration) when a time is not a whole number of ticks
/// and Error(AmbiguousOverlap) for a same-pitch, same-channel note nested
/// inside another (first-in first-out decoding could not recover it).
std::vector<std::uint8_t> write_midi_fixture(const FixtureSpec& spec);

/// The note list parse_smf should return for `spec`.
std::vector<midi::NoteEvent> expected_notes(const FixtureSpec& spec);

/// Synthetic MIDI corpus: composers with distinct chord palettes and rhythmic
/// vocabularies writing chord progressions.
struct MidiCorpusSpec {
  int composers = 12;
  int min_pieces = 3;
  int max_pieces = 12;
  int min_beats = 32;
  int max_beats = 256;
  std::uint64_t seed = 7;
};

struct SyntheticPiece {
  corpus::ManifestEntry entry;  // path is a relative "<composer>/<n>.mid" name
  FixtureSpec fixture;
};

std::vector<SyntheticPiece> synth_midi_corpus(const MidiCorpusSpec& spec);

}  // namespace harmonica::synth
