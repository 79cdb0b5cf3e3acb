#include "harmonica/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "harmonica/error.hpp"

namespace harmonica::synth {

namespace {

void put_u16(std::vector<std::uint8_t>& out, unsigned v) {
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
}

void put_vlq(std::vector<std::uint8_t>& out, std::uint32_t v) {
  std::uint8_t buf[5];
  int n = 0;
  buf[n++] = static_cast<std::uint8_t>(v & 0x7F);
  while (v >>= 7) buf[n++] = static_cast<std::uint8_t>((v & 0x7F) | 0x80);
  while (n--) out.push_back(buf[n]);
}

midi::Tick beats_to_ticks(double beats, midi::Tick beat_ticks) {
  const double exact = beats * static_cast<double>(beat_ticks);
  const double rounded = std::round(exact);
  if (std::fabs(exact - rounded) > 1e-6 || rounded < 0 || rounded > 0x0FFFFFFF) {
    throw Error(Errc::UnrepresentableDuration,
                std::to_string(beats) + " beats is not a whole number of ticks");
  }
  return static_cast<midi::Tick>(rounded);
}

int power_of_two_exponent(int denominator) {
  for (int p = 0; p <= 5; ++p) {
    if ((1 << p) == denominator) return p;
  }
  throw Error(Errc::InvalidSpec, "denominator must be a power of two up to 32");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ZipfSampler::ZipfSampler(double gamma, int vocab_size) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw Error(Errc::BadGamma, "Zipf exponent must exceed 1, got " + std::to_string(gamma));
  }
  if (vocab_size < 1 || vocab_size > chroma::kCodewordCount) {
    throw Error(Errc::InvalidSpec, "vocabulary size must lie in [1, 4096]");
  }
  cdf_.resize(static_cast<std::size_t>(vocab_size));
  double total = 0;
  for (int r = 1; r <= vocab_size; ++r) {
    total += std::pow(static_cast<double>(r), -gamma);
    cdf_[static_cast<std::size_t>(r - 1)] = total;
  }
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

int ZipfSampler::sample(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), std::ssize(cdf_) - 1)) + 1;
}

double ZipfSampler::probability(int rank) const {
  const auto i = static_cast<std::size_t>(rank - 1);
  return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
}

chroma::Codeword rank_codeword(int rank) noexcept {
  return chroma::Codeword(static_cast<std::uint16_t>(rank % chroma::kCodewordCount));
}

std::vector<std::vector<chroma::Codeword>> sample_corpus(const ZipfSpec& spec) {
  const ZipfSampler sampler(spec.gamma, spec.vocab_size);
  std::vector<std::vector<chroma::Codeword>> pieces;
  pieces.reserve(spec.piece_lengths.size());
  for (std::size_t i = 0; i < spec.piece_lengths.size(); ++i) {
    std::mt19937_64 rng(derive_seed(spec.seed, i));
    std::vector<chroma::Codeword> piece(spec.piece_lengths[i]);
    for (auto& w : piece) w = rank_codeword(sampler.sample(rng));
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

std::vector<std::size_t> log_uniform_lengths(std::size_t count, double lo, double hi, std::uint64_t seed) {
  if (!(lo >= 1) || !(hi >= lo)) throw Error(Errc::InvalidSpec, "need 1 <= lo <= hi");
  std::mt19937_64 rng(derive_seed(seed, 0xC0FFEE));
  const double a = std::log(lo), b = std::log(hi);
  std::vector<std::size_t> out(count);
  for (auto& len : out) {
    len = static_cast<std::size_t>(std::llround(std::exp(a + (b - a) * uniform01(rng))));
  }
  return out;
}

std::vector<midi::NoteEvent> expected_notes(const FixtureSpec& spec) {
  const midi::TimeSignatureSegment sig{0, spec.numerator, spec.denominator};
  const auto beat = midi::ticks_per_unit(sig, spec.ticks_per_quarter, Rational(1, 1));
  std::vector<midi::NoteEvent> notes;
  for (const auto& n : spec.notes) {
    if (n.pitch < 0 || n.pitch > 127 || n.channel < 0 || n.channel > 15) {
      throw Error(Errc::InvalidSpec, "pitch or channel out of range");
    }
    const auto onset = beats_to_ticks(n.onset_beats, beat);
    const auto duration = beats_to_ticks(n.duration_beats, beat);
    if (duration <= 0) throw Error(Errc::UnrepresentableDuration, "note duration must be positive");
    notes.push_back({n.pitch, onset, duration, n.channel, 0});
  }
  std::sort(notes.begin(), notes.end(), [](const auto& a, const auto& b) {
    return std::tie(a.onset, a.pitch, a.channel, a.duration) < std::tie(b.onset, b.pitch, b.channel, b.duration);
  });
  return notes;
}

std::vector<std::uint8_t> write_midi_fixture(const FixtureSpec& spec) {
  if (spec.ticks_per_quarter < 1 || spec.ticks_per_quarter > 0x7FFF) {
    throw Error(Errc::InvalidSpec, "ticks per quarter must lie in [1, 32767]");
  }
  if (spec.numerator < 1 || spec.numerator > 255) throw Error(Errc::InvalidSpec, "bad numerator");
  const int power = power_of_two_exponent(spec.denominator);
  const auto notes = expected_notes(spec);

  // reject nesting of same-pitch notes on one channel
  std::map<std::pair<int, int>, midi::Tick> last_end;
  for (const auto& n : notes) {
    auto& end = last_end[{n.channel, n.pitch}];
    if (n.onset < end && n.end() <= end) {
      throw Error(Errc::AmbiguousOverlap, "note " + std::to_string(n.pitch) + " nested in an earlier one");
    }
    end = std::max(end, n.end());
  }

  struct Event {
    midi::Tick tick;
    int order;  // note-offs before note-ons at equal ticks
    std::uint8_t status, d1, d2;
  };
  std::vector<Event> events;
  events.reserve(notes.size() * 2);
  for (const auto& n : notes) {
    const auto ch = static_cast<std::uint8_t>(n.channel);
    events.push_back({n.onset, 1, static_cast<std::uint8_t>(0x90 | ch), static_cast<std::uint8_t>(n.pitch), 64});
    events.push_back({n.end(), 0, static_cast<std::uint8_t>(0x80 | ch), static_cast<std::uint8_t>(n.pitch), 0});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return std::tie(a.tick, a.order) < std::tie(b.tick, b.order); });

  std::vector<std::uint8_t> track;
  put_vlq(track, 0);
  track.insert(track.end(), {0xFF, 0x58, 0x04, static_cast<std::uint8_t>(spec.numerator),
                             static_cast<std::uint8_t>(power), 24, 8});
  midi::Tick now = 0;
  for (const auto& e : events) {
    put_vlq(track, static_cast<std::uint32_t>(e.tick - now));
    now = e.tick;
    track.insert(track.end(), {e.status, e.d1, e.d2});
  }
  put_vlq(track, 0);
  track.insert(track.end(), {0xFF, 0x2F, 0x00});

  std::vector<std::uint8_t> out = {'M', 'T', 'h', 'd'};
  put_u32(out, 6);
  put_u16(out, 0);
  put_u16(out, 1);
  put_u16(out, static_cast<unsigned>(spec.ticks_per_quarter));
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  put_u32(out, static_cast<std::uint32_t>(track.size()));
  out.insert(out.end(), track.begin(), track.end());
  return out;
}

namespace {

// Chord shapes relative to the tonic of a major key.
const std::vector<std::vector<int>> kDiatonic = {
    {0, 4, 7}, {5, 9, 0}, {7, 11, 2}, {9, 0, 4}, {2, 5, 9}, {4, 7, 11}, {7, 11, 2, 5}, {0, 4}, {0}, {7},
};

struct ComposerStyle {
  std::vector<std::vector<int>> palette;
  int numerator = 4;
  int denominator = 4;
  double melody_rate = 0.3;
  double ornament_rate = 0.02;
  double rest_rate = 0.03;
};

ComposerStyle make_style(int index, int composers, std::mt19937_64& rng) {
  ComposerStyle style;
  // later composers reach for more chromatic material
  const double modernity = composers > 1 ? static_cast<double>(index) / (composers - 1) : 0.5;
  style.palette = kDiatonic;
  const int extra = static_cast<int>(std::lround(modernity * 40.0 * (0.5 + uniform01(rng))));
  for (int i = 0; i < extra; ++i) {
    std::vector<int> chord;
    const int size = 2 + static_cast<int>(uniform01(rng) * (2 + 3 * modernity));
    while (static_cast<int>(chord.size()) < size) {
      const int pc = static_cast<int>(uniform01(rng) * 12);
      if (std::find(chord.begin(), chord.end(), pc) == chord.end()) chord.push_back(pc);
    }
    style.palette.push_back(chord);
  }
  static constexpr std::pair<int, int> kMeters[] = {{4, 4}, {3, 4}, {2, 4}, {6, 8}, {3, 8}, {2, 2}};
  const auto& meter = kMeters[static_cast<std::size_t>(uniform01(rng) * std::size(kMeters))];
  style.numerator = meter.first;
  style.denominator = meter.second;
  style.melody_rate = 0.1 + 0.5 * uniform01(rng);
  style.ornament_rate = 0.01 + 0.04 * uniform01(rng);
  return style;
}

FixtureSpec make_piece(const ComposerStyle& style, int beats, std::mt19937_64& rng) {
  FixtureSpec fx;
  fx.numerator = style.numerator;
  fx.denominator = style.denominator;
  const int tonic = static_cast<int>(uniform01(rng) * 12);

  // Zipf-like preference over the palette, rank 1 = tonic triad
  std::vector<double> cdf(style.palette.size());
  double total = 0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    total += 1.0 / static_cast<double>(i + 1);
    cdf[i] = total;
  }

  static constexpr double kChordLengths[] = {0.5, 1.0, 1.0, 1.5, 2.0};
  static constexpr int kScale[] = {0, 2, 4, 5, 7, 9, 11};
  double at = 0;
  while (at < beats) {
    const double len = kChordLengths[static_cast<std::size_t>(uniform01(rng) * std::size(kChordLengths))];
    if (uniform01(rng) < style.rest_rate) {
      at += len;
      continue;
    }
    const double u = uniform01(rng) * total;
    const auto pick = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const auto& chord = style.palette[std::min(pick, style.palette.size() - 1)];
    for (int pc : chord) {
      fx.notes.push_back({60 + (pc + tonic) % 12, at, len, 0});
    }
    fx.notes.push_back({36 + (chord.front() + tonic) % 12, at, len, 2});

    if (uniform01(rng) < style.melody_rate) {
      // melody line over the chord in sixteenths or eighths, with the odd
      // thirty-second ornament
      double m = at;
      while (m < at + len) {
        double step = uniform01(rng) < 0.5 ? 0.25 : 0.5;
        if (uniform01(rng) < style.ornament_rate) step = 0.125;
        step = std::min(step, at + len - m);
        const int degree = kScale[static_cast<std::size_t>(uniform01(rng) * 7)];
        fx.notes.push_back({72 + (degree + tonic) % 12, m, step, 1});
        m += step;
      }
    }
    at += len;
  }
  return fx;
}

}  // namespace

std::vector<SyntheticPiece> synth_midi_corpus(const MidiCorpusSpec& spec) {
  if (spec.composers < 1 || spec.min_pieces < 1 || spec.max_pieces < spec.min_pieces || spec.min_beats < 1 ||
      spec.max_beats < spec.min_beats) {
    throw Error(Errc::InvalidSpec, "invalid synthetic corpus spec");
  }
  std::vector<SyntheticPiece> out;
  for (int c = 0; c < spec.composers; ++c) {
    std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(c)));
    const auto style = make_style(c, spec.composers, rng);
    char name[32];
    std::snprintf(name, sizeof name, "Composer %02d", c + 1);
    const int birth = 1400 + static_cast<int>(std::lround(540.0 * c / std::max(1, spec.composers - 1)));
    const int death = birth + 40 + static_cast<int>(uniform01(rng) * 40);
    const int pieces = spec.min_pieces + static_cast<int>(uniform01(rng) * (spec.max_pieces - spec.min_pieces + 1));
    for (int p = 0; p < pieces; ++p) {
      std::mt19937_64 piece_rng(derive_seed(derive_seed(spec.seed, static_cast<std::uint64_t>(c)), static_cast<std::uint64_t>(p)));
      const int beats = spec.min_beats + static_cast<int>(std::floor(std::exp(
                                             std::log(static_cast<double>(spec.max_beats - spec.min_beats + 1)) *
                                             uniform01(piece_rng)))) - 1;
      char path[64];
      std::snprintf(path, sizeof path, "composer_%02d/piece_%03d.mid", c + 1, p + 1);
      out.push_back({corpus::ManifestEntry{path, name, birth, death}, make_piece(style, std::max(1, beats), piece_rng)});
    }
  }
  return out;
}

}  // namespace harmonica::synth
