#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "harmonica/rational.hpp"

namespace harmonica::midi {

using Tick = std::int64_t;

struct NoteEvent {
  int pitch = 0;  // MIDI note number 0..127 (C-1..G9)
  Tick onset = 0;
  Tick duration = 0;  // > 0
  int channel = 0;    // 0..15
  int track = 0;

  Tick end() const noexcept { return onset + duration; }
  friend bool operator==(const NoteEvent&, const NoteEvent&) = default;
};

struct TimeSignatureSegment {
  Tick start_tick = 0;
  int numerator = 4;
  int denominator = 4;  // power of two in {1, 2, 4, 8, 16, 32}

  friend bool operator==(const TimeSignatureSegment&, const TimeSignatureSegment&) = default;
};

struct PieceScore {
  int ticks_per_quarter = 480;
  std::vector<NoteEvent> notes;  // sorted by (onset, pitch, channel)
  std::vector<TimeSignatureSegment> signatures;
  std::string source_id;

  // Parse warnings, not errors.
  std::size_t dangling_notes = 0;   // note-ons closed at end of track
  std::size_t zero_length_notes = 0;  // note-on/off at the same tick, dropped

  Tick last_note_end() const noexcept;
};

struct ParseOptions {
  bool drop_percussion = false;  // discard MIDI channel 10 (index 9)
};

/// Decodes a format-0 or format-1 Standard MIDI File with PPQN timing.
///
/// Notes from all tracks are merged by tick. A note-on with velocity 0 is a
/// note-off; overlapping notes of the same pitch on the same channel close
/// first-in first-out. Tempo, key signature and every other meta or sysex
/// event is skipped; only time signatures and end-of-track are honoured.
///
/// Throws Error with MalformedHeader, MalformedTrack, UnsupportedFormat,
/// SmpteTimingUnsupported, InvalidTimeSignature or NoTimeSignature.
PieceScore parse_smf(std::span<const std::uint8_t> bytes, const ParseOptions& options = {});

/// Reads a whole file and forwards to parse_smf. source_id is set to `path`.
PieceScore read_smf(const std::string& path, const ParseOptions& options = {});

/// Frame length in ticks: round(tpq * 4 / denominator * unit_beats).
/// The beat follows the signature denominator (quarter in x/4, eighth in x/8).
Tick ticks_per_unit(const TimeSignatureSegment& segment, int ticks_per_quarter,
                    const Rational& unit_beats);

struct FrameGrid {
  std::vector<Tick> boundaries;   // strictly increasing; frame i = [b[i], b[i+1])
  std::vector<Tick> nominal_ticks;  // full unit length of frame i (partial frames keep it)
  Rational unit_beats;

  std::size_t frame_count() const noexcept { return nominal_ticks.size(); }
};

/// Tiles every signature segment from its start with frames of one time unit.
/// A frame cut short by a signature change or by the end of the piece is
/// kept. The grid ends at the first boundary at or after the last note end.
FrameGrid build_frame_grid(const PieceScore& score, const Rational& unit_beats);

}  // namespace harmonica::midi
