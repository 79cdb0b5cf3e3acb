#include "harmonica/chroma.hpp"

#include <algorithm>
#include <bit>

#include "harmonica/error.hpp"

namespace harmonica::chroma {

Codeword Codeword::from_pitch_classes(const PitchClassSet& set) noexcept {
  std::uint16_t id = 0;
  for (int pc = 0; pc < kPitchClasses; ++pc) {
    if (set.test(pc)) id |= static_cast<std::uint16_t>(1u << (kPitchClasses - 1 - pc));
  }
  return Codeword(id);
}

Codeword Codeword::from_bits(std::string_view bits) {
  if (bits.size() != kPitchClasses) {
    throw Error(Errc::CacheFormatMismatch, "codeword must have 12 digits: '" + std::string(bits) + "'");
  }
  std::uint16_t id = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw Error(Errc::CacheFormatMismatch, "codeword digit is not binary: '" + std::string(bits) + "'");
    }
    id = static_cast<std::uint16_t>((id << 1) | (c == '1' ? 1u : 0u));
  }
  return Codeword(id);
}

PitchClassSet Codeword::pitch_classes() const noexcept {
  PitchClassSet set;
  for (int pc = 0; pc < kPitchClasses; ++pc) set.set(pc, has(pc));
  return set;
}

int Codeword::filling() const noexcept { return std::popcount(id_); }

std::string Codeword::bits() const {
  std::string out(kPitchClasses, '0');
  for (int pc = 0; pc < kPitchClasses; ++pc) {
    if (has(pc)) out[pc] = '1';
  }
  return out;
}

Codeword Codeword::rotated(int shift) const noexcept {
  shift = ((shift % kPitchClasses) + kPitchClasses) % kPitchClasses;
  if (shift == 0) return *this;
  // Moving pitch class p to p + shift is a right rotation of the MSB-first id.
  const unsigned v = id_;
  const unsigned r = (v >> shift) | (v << (kPitchClasses - shift));
  return Codeword(static_cast<std::uint16_t>(r & 0x0FFFu));
}

std::vector<Chroma> build_chromas(const midi::PieceScore& score, const midi::FrameGrid& grid) {
  std::vector<Chroma> out(grid.frame_count(), Chroma{});
  if (out.empty()) return out;
  const auto& b = grid.boundaries;

  for (const auto& note : score.notes) {
    const int pc = note.pitch % kPitchClasses;
    // first frame whose right boundary is past the onset
    auto it = std::upper_bound(b.begin(), b.end(), note.onset);
    std::size_t frame = it == b.begin() ? 0 : static_cast<std::size_t>(it - b.begin()) - 1;
    for (; frame < out.size() && b[frame] < note.end(); ++frame) {
      const auto lo = std::max(b[frame], note.onset);
      const auto hi = std::min(b[frame + 1], note.end());
      if (hi <= lo) continue;
      out[frame][pc] += static_cast<double>(hi - lo) / static_cast<double>(grid.nominal_ticks[frame]);
    }
  }
  return out;
}

Codeword discretize(const Chroma& chroma, double threshold) noexcept {
  PitchClassSet set;
  for (int pc = 0; pc < kPitchClasses; ++pc) {
    set.set(pc, chroma[pc] > 0.0 && chroma[pc] >= threshold);
  }
  return Codeword::from_pitch_classes(set);
}

std::vector<Codeword> discretize(std::span<const Chroma> chromas, double threshold) {
  std::vector<Codeword> out;
  out.reserve(chromas.size());
  for (const auto& c : chromas) out.push_back(discretize(c, threshold));
  return out;
}

std::vector<Codeword> trim_edge_silence(std::span<const Codeword> codewords) {
  auto first = std::find_if(codewords.begin(), codewords.end(), [](Codeword w) { return !w.empty(); });
  if (first == codewords.end()) return {};
  auto last = std::find_if(codewords.rbegin(), codewords.rend(), [](Codeword w) { return !w.empty(); });
  return {first, last.base()};
}

Chromagram encode_score(const midi::PieceScore& score, const Rational& unit_beats, double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw Error(Errc::InvalidSpec, "threshold must lie in [0, 1)");
  }
  const auto grid = midi::build_frame_grid(score, unit_beats);
  const auto chromas = build_chromas(score, grid);
  const auto words = discretize(chromas, threshold);

  Chromagram out;
  out.source_id = score.source_id;
  out.codewords = trim_edge_silence(words);
  out.unit_beats = unit_beats;
  out.threshold = threshold;
  return out;
}

}  // namespace harmonica::chroma
