#include "harmonica/key.hpp"

#include <cmath>

#include "harmonica/error.hpp"

namespace harmonica::key {

namespace {

constexpr std::array<std::string_view, 12> kNames = {"C",  "C#", "D",  "D#", "E",  "F",
                                                     "F#", "G",  "G#", "A",  "A#", "B"};
constexpr int kMinorTarget = 9;  // A

double pearson(const std::array<double, 12>& x, const KeyProfile& y) {
  double mx = 0, my = 0;
  for (int i = 0; i < 12; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= 12;
  my /= 12;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 12; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::string_view pitch_class_name(int pitch_class) { return kNames.at(((pitch_class % 12) + 12) % 12); }

int KeyEstimate::shift() const noexcept {
  const int target = mode == Mode::Major ? 0 : kMinorTarget;
  return ((target - tonic) % 12 + 12) % 12;
}

std::string KeyEstimate::name() const {
  return std::string(pitch_class_name(tonic)) + (mode == Mode::Major ? "maj" : "min");
}

KeyEstimate KeyEstimate::from_index(int key_index, double correlation) {
  if (key_index < 0 || key_index >= 24) {
    throw Error(Errc::InvalidSpec, "key index out of range: " + std::to_string(key_index));
  }
  return {key_index < 12 ? Mode::Major : Mode::Minor, key_index % 12, correlation};
}

std::optional<KeyEstimate> KeyEstimate::parse(std::string_view text) {
  for (int i = 0; i < 24; ++i) {
    auto k = from_index(i);
    if (k.name() == text) return k;
  }
  return std::nullopt;
}

KeyProfile rotate_profile(const KeyProfile& profile, int tonic) noexcept {
  KeyProfile out{};
  for (int p = 0; p < 12; ++p) out[p] = profile[((p - tonic) % 12 + 12) % 12];
  return out;
}

std::array<double, 12> average_chroma(std::span<const chroma::Codeword> codewords) {
  if (codewords.empty()) throw Error(Errc::EmptyPiece, "no codewords to average");
  std::array<std::size_t, 12> counts{};
  for (auto w : codewords) {
    for (int pc = 0; pc < 12; ++pc) counts[pc] += w.has(pc) ? 1 : 0;
  }
  std::array<double, 12> avg{};
  const auto n = static_cast<double>(codewords.size());
  for (int pc = 0; pc < 12; ++pc) avg[pc] = static_cast<double>(counts[pc]) / n;
  return avg;
}

KeyEstimate find_key(const std::array<double, 12>& avg) {
  bool constant = true;
  for (double v : avg) constant = constant && v == avg[0];
  if (constant) throw Error(Errc::ZeroVariance, "average chroma has no variance");

  KeyEstimate best{Mode::Major, 0, -2.0};
  for (Mode mode : {Mode::Major, Mode::Minor}) {
    const auto& profile = mode == Mode::Major ? kMajorProfile : kMinorProfile;
    for (int tonic = 0; tonic < 12; ++tonic) {
      const double r = pearson(avg, rotate_profile(profile, tonic));
      if (r > best.correlation) best = {mode, tonic, r};
    }
  }
  return best;
}

chroma::Chromagram transpose(const chroma::Chromagram& chromagram, const KeyEstimate& key) {
  if (chromagram.transposed) {
    throw Error(Errc::AlreadyTransposed, chromagram.source_id);
  }
  chroma::Chromagram out = chromagram;
  const int shift = key.shift();
  for (auto& w : out.codewords) w = w.rotated(shift);
  out.key = key;
  out.transposed = true;
  return out;
}

std::array<std::size_t, 24> key_histogram(std::span<const KeyEstimate> estimates) noexcept {
  std::array<std::size_t, 24> counts{};
  for (const auto& k : estimates) ++counts[static_cast<std::size_t>(k.key_index())];
  return counts;
}

}  // namespace harmonica::key
