#include "harmonica/cache.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "harmonica/error.hpp"

namespace harmonica::cache {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

class LineCursor {
 public:
  explicit LineCursor(std::string_view text) : text_(text) {}

  bool done() const noexcept { return text_.empty(); }
  std::string_view next() {
    const auto nl = text_.find('\n');
    if (nl == std::string_view::npos) {
      throw Error(Errc::CacheFormatMismatch, "line without terminating newline");
    }
    auto line = text_.substr(0, nl);
    text_.remove_prefix(nl + 1);
    return line;
  }
  std::string_view header(std::string_view name) {
    if (done()) throw Error(Errc::CacheFormatMismatch, "missing header #" + std::string(name));
    auto line = next();
    const std::string prefix = "#" + std::string(name) + "=";
    if (line.substr(0, prefix.size()) != prefix) {
      throw Error(Errc::CacheFormatMismatch,
                  "expected #" + std::string(name) + ", found '" + std::string(line) + "'");
    }
    return line.substr(prefix.size());
  }

 private:
  std::string_view text_;
};

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::CacheFormatMismatch, "bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string format_chromagram(const chroma::Chromagram& cg) {
  std::string out;
  out.reserve(64 + cg.codewords.size() * 13);
  out += "#source=" + cg.source_id + "\n";
  out += "#unit=" + cg.unit_beats.str() + "\n";
  out += "#threshold=" + format_double(cg.threshold) + "\n";
  out += "#key=" + (cg.key ? cg.key->name() : std::string("none")) + "\n";
  out += "#shift=" + std::to_string(cg.key ? cg.key->shift() : 0) + "\n";
  out += std::string("#transposed=") + (cg.transposed ? "1" : "0") + "\n";
  for (auto w : cg.codewords) {
    out += w.bits();
    out += '\n';
  }
  return out;
}

chroma::Chromagram parse_chromagram(std::string_view text) {
  LineCursor lines(text);
  chroma::Chromagram cg;
  cg.source_id = std::string(lines.header("source"));
  try {
    cg.unit_beats = Rational::parse(lines.header("unit"));
  } catch (const Error& e) {
    if (e.code() == Errc::CacheFormatMismatch) throw;
    throw Error(Errc::CacheFormatMismatch, e.what());
  }
  cg.threshold = parse_number<double>(lines.header("threshold"), "threshold");

  const auto key_text = lines.header("key");
  const int shift = parse_number<int>(lines.header("shift"), "shift");
  if (key_text != "none") {
    cg.key = key::KeyEstimate::parse(key_text);
    if (!cg.key) throw Error(Errc::CacheFormatMismatch, "unknown key '" + std::string(key_text) + "'");
    if (cg.key->shift() != shift) throw Error(Errc::CacheFormatMismatch, "shift does not match key");
  } else if (shift != 0) {
    throw Error(Errc::CacheFormatMismatch, "nonzero shift without a key");
  }

  const auto transposed = lines.header("transposed");
  if (transposed != "0" && transposed != "1") {
    throw Error(Errc::CacheFormatMismatch, "transposed must be 0 or 1");
  }
  cg.transposed = transposed == "1";

  while (!lines.done()) cg.codewords.push_back(chroma::Codeword::from_bits(lines.next()));
  return cg;
}

void check_parameters(const chroma::Chromagram& cg, const CacheKey& key) {
  auto stale = [&](const std::string& what) {
    throw Error(Errc::StaleParameters, cg.source_id + ": cached " + what + " differs from request");
  };
  if (cg.source_id != key.source_id) stale("source");
  if (cg.unit_beats != key.unit_beats) stale("unit");
  if (cg.threshold != key.threshold) stale("threshold");
  if (cg.transposed != key.transposed) stale("transposition mode");
}

void write_cache(const chroma::Chromagram& cg, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // write-then-rename so a concurrent reader never sees a half-written file
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + tmp.string());
    const auto text = format_chromagram(cg);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(Errc::Io, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

chroma::Chromagram read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_chromagram(buf.str());
}

chroma::Chromagram read_cache(const std::filesystem::path& path, const CacheKey& expected) {
  auto cg = read_cache(path);
  check_parameters(cg, expected);
  return cg;
}

std::string sha256_hex(std::string_view text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::Io, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0x0F];
  }
  return out;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, std::string_view source_id,
                                 std::string_view variant) {
  std::string key(source_id);
  if (!variant.empty()) {
    key += '#';
    key += variant;
  }
  return dir / (sha256_hex(key) + ".cgm");
}

}  // namespace harmonica::cache
