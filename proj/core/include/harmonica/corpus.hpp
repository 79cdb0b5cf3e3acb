#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harmonica/chroma.hpp"

namespace harmonica::corpus {

struct ManifestEntry {
  std::string path;
  std::string composer;
  int birth = 0;
  int death = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Parses a CSV with header `path,composer,birth,death`. Fields may be
/// double-quoted. Throws Error with MalformedRow or DuplicatePath.
std::vector<ManifestEntry> load_manifest(std::string_view text);
std::vector<ManifestEntry> read_manifest(const std::string& path);

/// Token counts per codeword type. Dense over the 4096 ids.
class FrequencyTable {
 public:
  void add(chroma::Codeword word, std::uint64_t count = 1);
  void add(std::span<const chroma::Codeword> words);
  void merge(const FrequencyTable& other);

  std::uint64_t count(chroma::Codeword word) const noexcept { return counts_[word.id()]; }
  /// L: total tokens.
  std::uint64_t tokens() const noexcept { return tokens_; }
  /// V: types with a nonzero count.
  std::size_t types() const noexcept { return types_; }

  /// Visits (codeword, n_r) for every type present, in id order.
  void for_each(const std::function<void(chroma::Codeword, std::uint64_t)>& fn) const;
  /// Types sorted by descending count, ties by ascending id.
  std::vector<std::pair<chroma::Codeword, std::uint64_t>> ranked() const;

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  std::array<std::uint64_t, chroma::kCodewordCount> counts_{};
  std::uint64_t tokens_ = 0;
  std::size_t types_ = 0;
};

struct ComposerDataset {
  std::string label;  // composer name, or piece id at piece level
  std::string composer;
  int birth = 0;
  int death = 0;
  std::size_t pieces = 0;
  std::size_t empty_pieces = 0;  // pieces contributing zero tokens
  FrequencyTable table;
};

/// One dataset per composer, ordered by chronological year then name.
/// `chromagrams` pairs element-wise with `entries`. Throws
/// Error(MixedTranspositionMode) if the pieces are not all transposed or all
/// untransposed, Error(InconsistentComposer) if one composer name carries two
/// different life spans.
std::vector<ComposerDataset> aggregate(std::span<const ManifestEntry> entries,
                                       std::span<const chroma::Chromagram> chromagrams);

/// One dataset per piece, labelled by source id, in manifest order.
std::vector<ComposerDataset> aggregate_pieces(std::span<const ManifestEntry> entries,
                                              std::span<const chroma::Chromagram> chromagrams);

/// CSV: composer,birth,death,pieces,L,V
std::string format_aggregate_csv(std::span<const ComposerDataset> datasets);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace harmonica::corpus
