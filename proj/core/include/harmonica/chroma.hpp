#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harmonica/key_estimate.hpp"
#include "harmonica/midi.hpp"
#include "harmonica/rational.hpp"

namespace harmonica::chroma {

inline constexpr int kPitchClasses = 12;
inline constexpr int kCodewordCount = 1 << kPitchClasses;  // 4096

/// Per-pitch-class duration within one frame, in units of the frame length.
/// Index 0 = C ... 11 = B.
using Chroma = std::array<double, kPitchClasses>;

/// Set of pitch classes, bit i = pitch class i (C = 0).
using PitchClassSet = std::bitset<kPitchClasses>;

/// A discretized chroma: 12 bits with C as the most significant bit of the id,
/// so the id's binary rendering reads C..B left to right.
class Codeword {
 public:
  constexpr Codeword() = default;
  constexpr explicit Codeword(std::uint16_t id) : id_(id & 0x0FFFu) {}

  static Codeword from_pitch_classes(const PitchClassSet& set) noexcept;
  /// Parses a 12-character string of '0'/'1'. Throws Error(CacheFormatMismatch).
  static Codeword from_bits(std::string_view bits);

  constexpr std::uint16_t id() const noexcept { return id_; }
  constexpr bool has(int pitch_class) const noexcept {
    return ((id_ >> (kPitchClasses - 1 - pitch_class)) & 1u) != 0;
  }
  PitchClassSet pitch_classes() const noexcept;
  /// Number of sounding pitch classes (the codeword's filling).
  int filling() const noexcept;
  bool empty() const noexcept { return id_ == 0; }
  std::string bits() const;
  /// Circular relabeling p -> (p + shift) mod 12.
  Codeword rotated(int shift) const noexcept;

  friend constexpr bool operator==(Codeword, Codeword) = default;
  friend constexpr auto operator<=>(Codeword, Codeword) = default;

 private:
  std::uint16_t id_ = 0;
};

inline Codeword encode(const PitchClassSet& set) noexcept { return Codeword::from_pitch_classes(set); }
inline PitchClassSet decode(Codeword word) noexcept { return word.pitch_classes(); }

/// Sequence of codewords for one piece plus the parameters that produced it.
struct Chromagram {
  std::string source_id;
  std::vector<Codeword> codewords;
  Rational unit_beats;
  double threshold = 0.1;
  std::optional<key::KeyEstimate> key;
  bool transposed = false;

  std::size_t length() const noexcept { return codewords.size(); }
};

/// Apportions each note's duration to the frames it overlaps, folded to pitch
/// class and summed over all channels and tracks. Weights are overlap ticks
/// divided by the frame's nominal length, so one note adds at most 1 to one
/// frame.
std::vector<Chroma> build_chromas(const midi::PieceScore& score, const midi::FrameGrid& grid);

/// bit i set iff weights[i] > 0 and weights[i] >= threshold.
Codeword discretize(const Chroma& chroma, double threshold) noexcept;

std::vector<Codeword> discretize(std::span<const Chroma> chromas, double threshold);

/// Drops leading and trailing empty codewords; interior ones are kept.
std::vector<Codeword> trim_edge_silence(std::span<const Codeword> codewords);

/// parse -> frame -> chroma -> discretize -> trim. No key finding.
Chromagram encode_score(const midi::PieceScore& score, const Rational& unit_beats, double threshold);

}  // namespace harmonica::chroma
