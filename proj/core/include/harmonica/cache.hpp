#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "harmonica/chroma.hpp"
#include "harmonica/rational.hpp"

namespace harmonica::cache {

/// Parameters a cached chromagram must match to be reused.
struct CacheKey {
  std::string source_id;
  Rational unit_beats;
  double threshold = 0.1;
  bool transposed = true;
};

/// Text cache format, line by line and in this order:
///
///   #source=<id>
///   #unit=<rational>
///   #threshold=<decimal>
///   #key=<name|none>
///   #shift=<0..11>
///   #transposed=<0|1>
///   <12-digit codeword, C leftmost>   (one per frame)
///
/// The threshold is written in shortest round-trip form.
std::string format_chromagram(const chroma::Chromagram& chromagram);

/// Throws Error(CacheFormatMismatch) on any deviation from the layout.
chroma::Chromagram parse_chromagram(std::string_view text);

/// Throws Error(StaleParameters) if the parsed header disagrees with `key`.
void check_parameters(const chroma::Chromagram& chromagram, const CacheKey& key);

void write_cache(const chroma::Chromagram& chromagram, const std::filesystem::path& path);
chroma::Chromagram read_cache(const std::filesystem::path& path);
chroma::Chromagram read_cache(const std::filesystem::path& path, const CacheKey& expected);

/// Lowercase hex SHA-256 of `text`.
std::string sha256_hex(std::string_view text);

/// `<dir>/<sha256(source_id [+ variant])>.cgm`. `variant` distinguishes
/// encodings whose parameters are not part of the header (percussion filtering).
std::filesystem::path cache_path(const std::filesystem::path& dir, std::string_view source_id,
                                 std::string_view variant = {});

}  // namespace harmonica::cache
