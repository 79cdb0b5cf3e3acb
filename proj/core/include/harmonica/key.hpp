#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "harmonica/chroma.hpp"
#include "harmonica/key_estimate.hpp"

namespace harmonica::key {

/// Probe-tone ratings, index 0 = tonic, ascending chromatically.
using KeyProfile = std::array<double, 12>;

inline constexpr KeyProfile kMajorProfile = {6.35, 2.23, 3.48, 2.33, 4.38, 4.09,
                                             2.52, 5.19, 2.39, 3.66, 2.29, 2.88};
inline constexpr KeyProfile kMinorProfile = {6.33, 2.68, 3.52, 5.38, 2.60, 3.53,
                                             2.54, 4.75, 3.98, 2.69, 3.34, 3.17};

/// Profile rotated so its tonic rating sits at pitch class `tonic`.
KeyProfile rotate_profile(const KeyProfile& profile, int tonic) noexcept;

/// Fraction of codewords with each pitch class set. Throws Error(EmptyPiece).
std::array<double, 12> average_chroma(std::span<const chroma::Codeword> codewords);

/// Krumhansl-Schmuckler: the (mode, tonic) whose rotated profile has the
/// highest Pearson correlation with `avg`. Ties go to major, then to the
/// lower tonic. Throws Error(ZeroVariance) when `avg` is constant.
KeyEstimate find_key(const std::array<double, 12>& avg);

/// Rotates every codeword by key.shift(). Throws Error(AlreadyTransposed).
chroma::Chromagram transpose(const chroma::Chromagram& chromagram, const KeyEstimate& key);

/// Pieces per key_index.
std::array<std::size_t, 24> key_histogram(std::span<const KeyEstimate> estimates) noexcept;

}  // namespace harmonica::key
