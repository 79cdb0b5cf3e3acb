#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace harmonica::key {

enum class Mode { Major, Minor };

/// Detected key of a piece. key_index: 0 = C major ... 11 = B major,
/// 12 = C minor ... 23 = B minor.
struct KeyEstimate {
  Mode mode = Mode::Major;
  int tonic = 0;
  double correlation = 0.0;

  int key_index() const noexcept { return mode == Mode::Major ? tonic : tonic + 12; }
  /// Rotation taking the tonic to C (major) or A (minor).
  int shift() const noexcept;
  /// "Cmaj", "F#min".
  std::string name() const;

  static KeyEstimate from_index(int key_index, double correlation = 0.0);
  /// Inverse of name(); nullopt if `text` is not a key name.
  static std::optional<KeyEstimate> parse(std::string_view text);
};

std::string_view pitch_class_name(int pitch_class);

}  // namespace harmonica::key
