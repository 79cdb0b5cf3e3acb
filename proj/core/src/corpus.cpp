#include "harmonica/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "harmonica/error.hpp"
#include "harmonica/vocab.hpp"

namespace harmonica::corpus {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"' && strip(field).empty()) {
      quoted = was_quoted = true;
      field.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : std::string(strip(field)));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) {
    throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(was_quoted ? field : std::string(strip(field)));
  return fields;
}

int parse_year(const std::string& text, std::size_t line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::MalformedRow,
                "line " + std::to_string(line_no) + ": year is not an integer: '" + text + "'");
  }
  return v;
}

void check_parallel(std::span<const ManifestEntry> entries, std::span<const chroma::Chromagram> cgs) {
  if (entries.size() != cgs.size()) {
    throw Error(Errc::InvalidSpec, "manifest and chromagram counts differ");
  }
  if (cgs.empty()) return;
  const bool mode = cgs.front().transposed;
  for (const auto& c : cgs) {
    if (c.transposed != mode) {
      throw Error(Errc::MixedTranspositionMode, c.source_id);
    }
  }
}

}  // namespace

std::vector<ManifestEntry> load_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (strip(line).empty()) continue;

    auto fields = split_csv_line(line, line_no);
    if (!header_seen) {
      header_seen = true;
      if (fields != std::vector<std::string>{"path", "composer", "birth", "death"}) {
        throw Error(Errc::MalformedRow, "manifest header must be path,composer,birth,death");
      }
      continue;
    }
    if (fields.size() != 4) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": expected 4 fields, got " +
                                          std::to_string(fields.size()));
    }
    ManifestEntry e{fields[0], fields[1], parse_year(fields[2], line_no), parse_year(fields[3], line_no)};
    if (e.path.empty() || e.composer.empty()) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": empty path or composer");
    }
    if (e.birth >= e.death) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": birth must precede death");
    }
    if (!seen.insert(e.path).second) {
      throw Error(Errc::DuplicatePath, e.path);
    }
    out.push_back(std::move(e));
  }
  if (!header_seen) throw Error(Errc::MalformedRow, "manifest is empty (no header)");
  return out;
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open manifest " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_manifest(buf.str());
}

void FrequencyTable::add(chroma::Codeword word, std::uint64_t count) {
  if (count == 0) return;
  auto& slot = counts_[word.id()];
  if (slot == 0) ++types_;
  slot += count;
  tokens_ += count;
}

void FrequencyTable::add(std::span<const chroma::Codeword> words) {
  for (auto w : words) add(w);
}

void FrequencyTable::merge(const FrequencyTable& other) {
  for (std::size_t id = 0; id < counts_.size(); ++id) {
    if (other.counts_[id] != 0) add(chroma::Codeword(static_cast<std::uint16_t>(id)), other.counts_[id]);
  }
}

void FrequencyTable::for_each(const std::function<void(chroma::Codeword, std::uint64_t)>& fn) const {
  for (std::size_t id = 0; id < counts_.size(); ++id) {
    if (counts_[id] != 0) fn(chroma::Codeword(static_cast<std::uint16_t>(id)), counts_[id]);
  }
}

std::vector<std::pair<chroma::Codeword, std::uint64_t>> FrequencyTable::ranked() const {
  std::vector<std::pair<chroma::Codeword, std::uint64_t>> out;
  out.reserve(types_);
  for_each([&](chroma::Codeword w, std::uint64_t n) { out.emplace_back(w, n); });
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::vector<ComposerDataset> aggregate(std::span<const ManifestEntry> entries,
                                       std::span<const chroma::Chromagram> chromagrams) {
  check_parallel(entries, chromagrams);
  std::map<std::string, ComposerDataset> by_name;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    auto [it, inserted] = by_name.try_emplace(e.composer);
    auto& ds = it->second;
    if (inserted) {
      ds.label = ds.composer = e.composer;
      ds.birth = e.birth;
      ds.death = e.death;
    } else if (ds.birth != e.birth || ds.death != e.death) {
      throw Error(Errc::InconsistentComposer, e.composer + " has two different life spans");
    }
    ++ds.pieces;
    if (chromagrams[i].codewords.empty()) ++ds.empty_pieces;
    ds.table.add(chromagrams[i].codewords);
  }

  std::vector<ComposerDataset> out;
  out.reserve(by_name.size());
  for (auto& [name, ds] : by_name) out.push_back(std::move(ds));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return vocab::composer_year(a.birth, a.death) < vocab::composer_year(b.birth, b.death);
  });
  return out;
}

std::vector<ComposerDataset> aggregate_pieces(std::span<const ManifestEntry> entries,
                                              std::span<const chroma::Chromagram> chromagrams) {
  check_parallel(entries, chromagrams);
  std::vector<ComposerDataset> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ComposerDataset ds;
    ds.label = entries[i].path;
    ds.composer = entries[i].composer;
    ds.birth = entries[i].birth;
    ds.death = entries[i].death;
    ds.pieces = 1;
    ds.empty_pieces = chromagrams[i].codewords.empty() ? 1 : 0;
    ds.table.add(chromagrams[i].codewords);
    out.push_back(std::move(ds));
  }
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_aggregate_csv(std::span<const ComposerDataset> datasets) {
  std::string out = "composer,birth,death,pieces,L,V\n";
  for (const auto& ds : datasets) {
    out += csv_field(ds.label) + ',' + std::to_string(ds.birth) + ',' + std::to_string(ds.death) + ',' +
           std::to_string(ds.pieces) + ',' + std::to_string(ds.table.tokens()) + ',' +
           std::to_string(ds.table.types()) + '\n';
  }
  return out;
}

}  // namespace harmonica::corpus
