#include "harmonica/midi.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <tuple>

#include "harmonica/error.hpp"

namespace harmonica::midi {

namespace {

constexpr int kPercussionChannel = 9;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool done() const noexcept { return pos_ >= bytes_.size(); }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }
  // Variable-length quantity, at most four bytes.
  std::uint32_t vlq() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const auto b = u8();
      v = (v << 7) | (b & 0x7Fu);
      if ((b & 0x80u) == 0) return v;
    }
    throw Error(Errc::MalformedTrack, "variable-length quantity longer than 4 bytes");
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  void skip(std::size_t n) { take(n); }
  std::uint8_t peek() const {
    if (done()) throw Error(Errc::MalformedTrack, "unexpected end of track data");
    return bytes_[pos_];
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw Error(Errc::MalformedTrack, "unexpected end of data");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

bool tag_is(std::span<const std::uint8_t> tag, const char (&name)[5]) {
  return std::equal(tag.begin(), tag.end(), name, name + 4,
                    [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); });
}

struct TrackResult {
  std::vector<NoteEvent> notes;
  std::vector<TimeSignatureSegment> signatures;
  std::size_t dangling = 0;
  std::size_t zero_length = 0;
};

TrackResult parse_track(std::span<const std::uint8_t> data, int track_index) {
  TrackResult out;
  ByteReader in(data);
  Tick now = 0;
  std::uint8_t running = 0;
  // (channel, pitch) -> onsets of still-sounding notes, oldest first
  std::map<std::pair<int, int>, std::deque<Tick>> open;

  auto close_note = [&](int channel, int pitch, Tick at) {
    auto it = open.find({channel, pitch});
    if (it == open.end() || it->second.empty()) return;  // stray note-off
    const Tick onset = it->second.front();
    it->second.pop_front();
    if (at > onset) {
      out.notes.push_back({pitch, onset, at - onset, channel, track_index});
    } else {
      ++out.zero_length;
    }
  };

  bool ended = false;
  while (!in.done() && !ended) {
    const auto delta = in.vlq();
    if (now > std::numeric_limits<Tick>::max() - delta) {
      throw Error(Errc::MalformedTrack, "tick overflow");
    }
    now += delta;

    std::uint8_t status = in.peek();
    if (status & 0x80u) {
      in.u8();
    } else {
      if (running == 0) throw Error(Errc::MalformedTrack, "data byte without running status");
      status = running;
    }

    if (status == 0xFF) {
      const auto type = in.u8();
      const auto len = in.vlq();
      auto payload = in.take(len);
      if (type == 0x2F) {
        ended = true;
      } else if (type == 0x58) {
        if (len < 2) throw Error(Errc::InvalidTimeSignature, "short time-signature event");
        const int numerator = payload[0];
        const int power = payload[1];
        if (numerator < 1 || power > 5) {
          throw Error(Errc::InvalidTimeSignature,
                      "time signature " + std::to_string(numerator) + "/2^" + std::to_string(power));
        }
        out.signatures.push_back({now, numerator, 1 << power});
      }
      // Sysex and meta events do not cancel running status in practice; many
      // writers rely on it, so it is left untouched.
      continue;
    }
    if (status == 0xF0 || status == 0xF7) {
      in.skip(in.vlq());
      continue;
    }
    if (status >= 0xF0) {
      throw Error(Errc::MalformedTrack, "unexpected system message in track");
    }

    running = status;
    const int kind = status & 0xF0;
    const int channel = status & 0x0F;
    const int data_len = (kind == 0xC0 || kind == 0xD0) ? 1 : 2;
    const auto d1 = in.u8();
    const auto d2 = data_len == 2 ? in.u8() : std::uint8_t{0};
    if ((d1 | d2) & 0x80u) throw Error(Errc::MalformedTrack, "data byte with high bit set");

    if (kind == 0x90 && d2 > 0) {
      open[{channel, d1}].push_back(now);
    } else if (kind == 0x80 || kind == 0x90) {
      close_note(channel, d1, now);
    }
  }

  for (auto& [key, onsets] : open) {
    while (!onsets.empty()) {
      ++out.dangling;
      close_note(key.first, key.second, now);
    }
  }
  return out;
}

// Sorts, collapses same-tick duplicates (last wins) and extends the first
// segment back to tick 0.
std::vector<TimeSignatureSegment> normalize_signatures(std::vector<TimeSignatureSegment> sigs) {
  std::stable_sort(sigs.begin(), sigs.end(),
                   [](const auto& a, const auto& b) { return a.start_tick < b.start_tick; });
  std::vector<TimeSignatureSegment> out;
  for (const auto& s : sigs) {
    if (!out.empty() && out.back().start_tick == s.start_tick) {
      out.back() = s;
    } else {
      out.push_back(s);
    }
  }
  if (!out.empty()) out.front().start_tick = 0;
  return out;
}

}  // namespace

Tick PieceScore::last_note_end() const noexcept {
  Tick end = 0;
  for (const auto& n : notes) end = std::max(end, n.end());
  return end;
}

PieceScore parse_smf(std::span<const std::uint8_t> bytes, const ParseOptions& options) {
  ByteReader in(bytes);
  if (in.remaining() < 14 || !tag_is(in.take(4), "MThd")) {
    throw Error(Errc::MalformedHeader, "missing MThd chunk");
  }
  const auto header_len = in.u32();
  if (header_len < 6 || header_len > in.remaining()) {
    throw Error(Errc::MalformedHeader, "bad header length " + std::to_string(header_len));
  }
  const auto format = in.u16();
  const auto track_count = in.u16();
  const auto division = in.u16();
  in.skip(header_len - 6);

  if (format > 1) {
    throw Error(Errc::UnsupportedFormat, "SMF format " + std::to_string(format));
  }
  if (division & 0x8000u) {
    throw Error(Errc::SmpteTimingUnsupported, "negative division field");
  }
  if (division == 0) throw Error(Errc::MalformedHeader, "zero ticks per quarter");

  PieceScore score;
  score.ticks_per_quarter = division;
  std::vector<TimeSignatureSegment> signatures;

  int track_index = 0;
  while (!in.done() && track_index < track_count) {
    if (in.remaining() < 8) throw Error(Errc::MalformedTrack, "truncated chunk header");
    auto tag = in.take(4);
    const auto len = in.u32();
    if (len > in.remaining()) throw Error(Errc::MalformedTrack, "chunk length past end of file");
    auto body = in.take(len);
    if (!tag_is(tag, "MTrk")) continue;  // unknown chunks are skipped

    auto track = parse_track(body, track_index++);
    score.dangling_notes += track.dangling;
    score.zero_length_notes += track.zero_length;
    signatures.insert(signatures.end(), track.signatures.begin(), track.signatures.end());
    for (auto& n : track.notes) {
      if (options.drop_percussion && n.channel == kPercussionChannel) continue;
      score.notes.push_back(n);
    }
  }

  score.signatures = normalize_signatures(std::move(signatures));
  if (score.signatures.empty()) {
    throw Error(Errc::NoTimeSignature, "no time-signature event in any track");
  }
  std::sort(score.notes.begin(), score.notes.end(), [](const NoteEvent& a, const NoteEvent& b) {
    return std::tie(a.onset, a.pitch, a.channel, a.duration, a.track) <
           std::tie(b.onset, b.pitch, b.channel, b.duration, b.track);
  });
  return score;
}

PieceScore read_smf(const std::string& path, const ParseOptions& options) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::Io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                  std::istreambuf_iterator<char>());
  auto score = parse_smf(bytes, options);
  score.source_id = path;
  return score;
}

Tick ticks_per_unit(const TimeSignatureSegment& segment, int ticks_per_quarter,
                    const Rational& unit_beats) {
  // round(tpq * 4 * num / (denominator * den)), half away from zero
  const std::int64_t numer = std::int64_t{ticks_per_quarter} * 4 * unit_beats.num();
  const std::int64_t denom = std::int64_t{segment.denominator} * unit_beats.den();
  const Tick ticks = (2 * numer + denom) / (2 * denom);
  if (ticks <= 0) {
    throw Error(Errc::ZeroUnit, "time unit " + unit_beats.str() + " rounds to zero ticks");
  }
  return ticks;
}

FrameGrid build_frame_grid(const PieceScore& score, const Rational& unit_beats) {
  FrameGrid grid;
  grid.unit_beats = unit_beats;
  const Tick end = score.last_note_end();
  if (end <= 0) return grid;

  grid.boundaries.push_back(0);
  for (std::size_t s = 0; s < score.signatures.size(); ++s) {
    const auto& seg = score.signatures[s];
    if (seg.start_tick >= end) break;
    const Tick seg_end = s + 1 < score.signatures.size()
                             ? std::min(score.signatures[s + 1].start_tick, end)
                             : end;
    const Tick unit = ticks_per_unit(seg, score.ticks_per_quarter, unit_beats);
    Tick at = seg.start_tick;
    while (at < seg_end) {
      // the final frame of the piece keeps its full length; a segment change
      // cuts the frame short
      const bool last_segment = seg_end == end;
      const Tick next = last_segment ? at + unit : std::min(at + unit, seg_end);
      grid.boundaries.push_back(next);
      grid.nominal_ticks.push_back(unit);
      at = next;
    }
  }
  return grid;
}

}  // namespace harmonica::midi
