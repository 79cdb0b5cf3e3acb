#include <gtest/gtest.h>

#include <random>

#include "harmonica/cache.hpp"
#include "harmonica/error.hpp"
#include "test_support.hpp"

namespace {

using namespace harmonica;
using namespace harmonica::cache;
using chroma::Chromagram;
using chroma::Codeword;

template <class Fn>
Errc error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no harmonica::Error thrown";
  return Errc::Io;
}

Chromagram sample() {
  Chromagram cg;
  cg.source_id = "bach/bwv846.mid";
  cg.unit_beats = Rational(3, 2);
  cg.threshold = 0.1;
  cg.key = key::KeyEstimate{key::Mode::Major, 7, 0.9};
  cg.transposed = true;
  cg.codewords = {Codeword(2192), Codeword(0), Codeword(0x211)};
  return cg;
}

void expect_same(const Chromagram& a, const Chromagram& b) {
  EXPECT_EQ(a.source_id, b.source_id);
  EXPECT_EQ(a.unit_beats, b.unit_beats);
  EXPECT_EQ(a.threshold, b.threshold);
  EXPECT_EQ(a.transposed, b.transposed);
  ASSERT_EQ(a.key.has_value(), b.key.has_value());
  if (a.key) EXPECT_EQ(a.key->key_index(), b.key->key_index());
  EXPECT_EQ(a.codewords, b.codewords);
}

TEST(CacheFormat, ExactText) {
  EXPECT_EQ(format_chromagram(sample()),
            "#source=bach/bwv846.mid\n"
            "#unit=3/2\n"
            "#threshold=0.1\n"
            "#key=Gmaj\n"
            "#shift=5\n"
            "#transposed=1\n"
            "100010010000\n"
            "000000000000\n"
            "001000010001\n");
}

TEST(CacheFormat, RoundTripsRandomChromagrams) {
  std::mt19937_64 rng(41);
  const std::vector<double> thresholds = {0, 0.025, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0 / 3.0, 0.123456789};
  for (int trial = 0; trial < 500; ++trial) {
    Chromagram cg;
    cg.source_id = "dir " + std::to_string(rng()) + "/x,y.mid";
    cg.unit_beats = Rational(1 + static_cast<std::int64_t>(rng() % 8), 1 + static_cast<std::int64_t>(rng() % 4));
    cg.threshold = thresholds[rng() % thresholds.size()];
    if (rng() % 3) cg.key = key::KeyEstimate::from_index(static_cast<int>(rng() % 24));
    cg.transposed = rng() % 2;
    cg.codewords.resize(rng() % 100);
    for (auto& w : cg.codewords) w = Codeword(static_cast<std::uint16_t>(rng() % 4096));
    const auto text = format_chromagram(cg);
    const auto back = parse_chromagram(text);
    expect_same(back, cg);
    EXPECT_EQ(format_chromagram(back), text);
  }
}

TEST(CacheFile, WriteThenReadIsByteIdentical) {
  harmonica::testing::TempDir dir;
  const auto path = dir / "nested/one.cgm";
  write_cache(sample(), path);
  const auto first = harmonica::testing::read_text(path);
  const auto cg = read_cache(path);
  expect_same(cg, sample());
  write_cache(cg, path);
  EXPECT_EQ(harmonica::testing::read_text(path), first);
  EXPECT_FALSE(std::filesystem::exists(dir / "nested/one.cgm.tmp"));
}

TEST(CacheFile, StaleParameters) {
  harmonica::testing::TempDir dir;
  const auto path = dir / "one.cgm";
  write_cache(sample(), path);
  const CacheKey good{"bach/bwv846.mid", Rational(3, 2), 0.1, true};
  EXPECT_NO_THROW(read_cache(path, good));

  auto k = good;
  k.threshold = 0.2;
  EXPECT_EQ(error_of([&] { read_cache(path, k); }), Errc::StaleParameters);
  k = good;
  k.unit_beats = Rational(1, 1);
  EXPECT_EQ(error_of([&] { read_cache(path, k); }), Errc::StaleParameters);
  k = good;
  k.transposed = false;
  EXPECT_EQ(error_of([&] { read_cache(path, k); }), Errc::StaleParameters);
  k = good;
  k.source_id = "other.mid";
  EXPECT_EQ(error_of([&] { read_cache(path, k); }), Errc::StaleParameters);
  EXPECT_EQ(error_of([&] { read_cache(dir / "missing.cgm"); }), Errc::Io);
}

TEST(CacheFormat, RejectsLayoutDeviations) {
  const std::string good = format_chromagram(sample());
  auto swap_lines = [&](int a, int b) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < good.size()) {
      const auto nl = good.find('\n', start);
      lines.push_back(good.substr(start, nl - start));
      start = nl + 1;
    }
    std::swap(lines[a], lines[b]);
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
  };
  EXPECT_EQ(error_of([&] { parse_chromagram(swap_lines(1, 2)); }), Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(swap_lines(0, 5)); }), Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(swap_lines(5, 6)); }), Errc::CacheFormatMismatch);

  auto replace = [&](const std::string& from, const std::string& to) {
    auto s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_EQ(error_of([&] { parse_chromagram(replace("#threshold=0.1", "#threshold=abc")); }),
            Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(replace("#unit=3/2", "#unit=0")); }), Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(replace("#key=Gmaj", "#key=Hmaj")); }), Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(replace("#shift=5", "#shift=4")); }), Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(replace("#transposed=1", "#transposed=yes")); }),
            Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(replace("100010010000", "10001001000")); }),
            Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(good.substr(0, good.size() - 1)); }), Errc::CacheFormatMismatch);
  EXPECT_EQ(error_of([&] { parse_chromagram(""); }), Errc::CacheFormatMismatch);
}

TEST(CacheFormat, NoKeyMeansZeroShift) {
  auto cg = sample();
  cg.key.reset();
  cg.transposed = false;
  const auto text = format_chromagram(cg);
  EXPECT_NE(text.find("#key=none\n#shift=0\n"), std::string::npos);
  EXPECT_FALSE(parse_chromagram(text).key.has_value());
}

TEST(CachePath, Sha256Naming) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const auto p = cache_path("/tmp/c", "abc");
  EXPECT_EQ(p, std::filesystem::path("/tmp/c") / "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad.cgm");
  EXPECT_NE(cache_path("/tmp/c", "abc", "drop-percussion"), p);
  EXPECT_EQ(cache_path("/tmp/c", "abc", "drop-percussion").filename().string(), sha256_hex("abc#drop-percussion") + ".cgm");
}

}  // namespace
