#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "harmonica/corpus.hpp"
#include "harmonica/error.hpp"
#include "harmonica/heaps.hpp"
#include "harmonica/key.hpp"
#include "harmonica/synth.hpp"

namespace {

using namespace harmonica;
using namespace harmonica::synth;
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

TEST(Seeds, DerivedSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 10; ++s) {
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(s, i));
  }
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(Seeds, Uniform01IsHalfOpenAndReproducible) {
  std::mt19937_64 a(3), b(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(a);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_EQ(u, uniform01(b));
  }
  EXPECT_EQ(kGeneratorName, "mt19937_64+splitmix64");
}

TEST(ZipfSampler, ProbabilitiesFollowRankPowerLaw) {
  const ZipfSampler s(2.0, 4096);
  double total = 0;
  for (int r = 1; r <= 4096; ++r) total += s.probability(r);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(s.probability(1) / s.probability(2), 4.0, 1e-9);
  EXPECT_NEAR(s.probability(10) / s.probability(100), 100.0, 1e-6);
}

TEST(ZipfSampler, RejectsBadParameters) {
  for (double g : {1.0, 0.5, -2.0, double(NAN), double(INFINITY)}) {
    EXPECT_EQ(error_of([&] { ZipfSampler(g, 100); }), Errc::BadGamma) << g;
  }
  EXPECT_EQ(error_of([] { ZipfSampler(2.0, 0); }), Errc::InvalidSpec);
  EXPECT_EQ(error_of([] { ZipfSampler(2.0, 4097); }), Errc::InvalidSpec);
  ZipfSpec spec;
  spec.gamma = 1.0;
  spec.piece_lengths = {10};
  EXPECT_EQ(error_of([&] { sample_corpus(spec); }), Errc::BadGamma);
}

TEST(ZipfSampler, EmpiricalFrequenciesConverge) {
  // chi-square over ranks with expected count >= 5; the rest pooled
  const ZipfSampler s(2.0, 4096);
  std::mt19937_64 rng(derive_seed(99, 0));
  constexpr int kDraws = 1000000;
  std::vector<long> counts(4097, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[static_cast<std::size_t>(s.sample(rng))];
  double chi2 = 0, pooled_obs = 0, pooled_exp = 0;
  int cells = 0;
  for (int r = 1; r <= 4096; ++r) {
    const double expected = kDraws * s.probability(r);
    if (expected >= 5) {
      chi2 += (counts[r] - expected) * (counts[r] - expected) / expected;
      ++cells;
    } else {
      pooled_obs += static_cast<double>(counts[r]);
      pooled_exp += expected;
    }
  }
  chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
  const double dof = cells;  // cells + 1 pooled - 1
  // mean dof, sd sqrt(2 dof): six standard deviations of headroom
  EXPECT_LT(chi2, dof + 6 * std::sqrt(2 * dof)) << "dof " << dof;
  EXPECT_NEAR(static_cast<double>(counts[1]) / kDraws, s.probability(1), 0.002);
}

TEST(SampleCorpus, SameSeedSameCorpus) {
  ZipfSpec spec;
  spec.piece_lengths = {100, 2000, 5};
  spec.seed = 12;
  const auto a = sample_corpus(spec), b = sample_corpus(spec);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[1].size(), 2000u);
  spec.seed = 13;
  EXPECT_NE(sample_corpus(spec), a);
}

TEST(SampleCorpus, LargeGammaCollapsesToOneType) {
  ZipfSpec spec;
  spec.gamma = 50;
  spec.piece_lengths = {1000, 10000, 50000};
  for (const auto& piece : sample_corpus(spec)) {
    corpus::FrequencyTable t;
    t.add(piece);
    EXPECT_EQ(t.types(), 1u);
    EXPECT_EQ(t.count(rank_codeword(1)), piece.size());
  }
}

TEST(SampleCorpus, RankCodewordMapping) {
  EXPECT_EQ(rank_codeword(1).id(), 1);
  EXPECT_EQ(rank_codeword(2192).id(), 2192);
  EXPECT_TRUE(rank_codeword(4096).empty());
}

TEST(SampleCorpus, HeapsExponentIsInverseGamma) {
  ZipfSpec spec;
  spec.gamma = 2.0;
  spec.vocab_size = 4096;
  spec.seed = 1;
  spec.piece_lengths = log_uniform_lengths(200, 1e2, 1e5, 1);
  std::vector<heaps::Point> pts;
  for (const auto& piece : sample_corpus(spec)) {
    corpus::FrequencyTable t;
    t.add(piece);
    pts.push_back({static_cast<double>(t.tokens()), static_cast<double>(t.types())});
  }
  EXPECT_NEAR(heaps::fit_heaps(pts).alpha, 0.5, 0.05);
}

TEST(LogUniformLengths, RangeAndDeterminism) {
  const auto a = log_uniform_lengths(5000, 100, 100000, 4);
  EXPECT_EQ(a, log_uniform_lengths(5000, 100, 100000, 4));
  std::size_t below_1e3 = 0;
  for (auto v : a) {
    EXPECT_GE(v, 100u);
    EXPECT_LE(v, 100000u);
    below_1e3 += v < 1000;
  }
  // a third of the log range
  EXPECT_NEAR(static_cast<double>(below_1e3) / 5000.0, 1.0 / 3.0, 0.03);
  EXPECT_EQ(error_of([] { log_uniform_lengths(3, 0.5, 10, 1); }), Errc::InvalidSpec);
}

TEST(MidiFixture, OneCrotchet) {
  FixtureSpec spec;
  spec.notes = {{60, 0, 1, 0}};
  const auto score = midi::parse_smf(write_midi_fixture(spec));
  ASSERT_EQ(score.notes.size(), 1u);
  EXPECT_EQ(score.notes[0], (midi::NoteEvent{60, 0, 480, 0, 0}));
}

TEST(MidiFixture, BeatsFollowTheDenominator) {
  FixtureSpec spec;
  spec.numerator = 6;
  spec.denominator = 8;
  spec.notes = {{60, 1, 0.5, 0}};
  EXPECT_EQ(midi::parse_smf(write_midi_fixture(spec)).notes[0], (midi::NoteEvent{60, 240, 120, 0, 0}));
}

TEST(MidiFixture, Errors) {
  FixtureSpec spec;
  spec.notes = {{60, 0, 1.0 / 7.0, 0}};
  EXPECT_EQ(error_of([&] { write_midi_fixture(spec); }), Errc::UnrepresentableDuration);
  spec.notes = {{60, 0, 0, 0}};
  EXPECT_EQ(error_of([&] { write_midi_fixture(spec); }), Errc::UnrepresentableDuration);
  spec.notes = {{60, 0, 4, 0}, {60, 1, 1, 0}};
  EXPECT_EQ(error_of([&] { write_midi_fixture(spec); }), Errc::AmbiguousOverlap);
  spec.notes = {{60, 0, 2, 0}, {60, 1, 2, 0}};  // overlapping, not nested: FIFO recovers it
  EXPECT_EQ(midi::parse_smf(write_midi_fixture(spec)).notes, expected_notes(spec));
  spec.notes = {{128, 0, 1, 0}};
  EXPECT_EQ(error_of([&] { write_midi_fixture(spec); }), Errc::InvalidSpec);
  spec.notes = {{60, 0, 1, 0}};
  spec.denominator = 3;
  EXPECT_EQ(error_of([&] { write_midi_fixture(spec); }), Errc::InvalidSpec);
}

// Two voices on separate channels in 4/4:
//   upper  E5 crotchet | D5 quaver C5 quaver | D5 minim (with an F#5 grace note on beat 4)
//   lower  C4 minim               | G3 dotted crotchet, B3 quaver
FixtureSpec two_voice_fixture() {
  FixtureSpec spec;
  spec.notes = {
      {76, 0.0, 1.0, 0},    {74, 1.0, 0.5, 0}, {72, 1.5, 0.5, 0}, {74, 2.0, 2.0, 0}, {78, 3.0, 0.0625, 0},
      {60, 0.0, 2.0, 1},    {55, 2.0, 1.5, 1}, {59, 3.5, 0.5, 1},
  };
  return spec;
}

TEST(MidiFixture, TwoVoiceChromagramByHand) {
  const auto score = midi::parse_smf(write_midi_fixture(two_voice_fixture()));
  EXPECT_EQ(score.notes, expected_notes(two_voice_fixture()));
  const auto grid = midi::build_frame_grid(score, Rational(1, 1));
  const auto chromas = chroma::build_chromas(score, grid);
  ASSERT_EQ(chromas.size(), 4u);
  // beat 2: C5 quaver plus C4 held = 1.5, D5 quaver = 0.5
  EXPECT_EQ(chromas[1][0], 1.5);
  EXPECT_EQ(chromas[1][2], 0.5);
  // beat 4: G3 tail 0.5, B3 0.5, grace note 1/16
  EXPECT_EQ(chromas[3][7], 0.5);
  EXPECT_EQ(chromas[3][11], 0.5);
  EXPECT_EQ(chromas[3][6], 0.0625);

  std::vector<std::string> bits;
  for (auto w : chroma::discretize(chromas, 0.1)) bits.push_back(w.bits());
  EXPECT_EQ(bits, (std::vector<std::string>{"100010000000", "101000000000", "001000010000", "001000010001"}));

  std::vector<std::string> all;
  for (auto w : chroma::discretize(chromas, 0.0)) all.push_back(w.bits());
  EXPECT_EQ(all[3], "001000110001");
}

TEST(MidiFixture, GMajorTriadsTransposeToCMajor) {
  FixtureSpec spec;
  const std::vector<std::vector<int>> progression = {{67, 71, 74}, {60, 64, 67}, {62, 66, 69}, {67, 71, 74}};
  for (int bar = 0; bar < 4; ++bar) {
    for (int beat = 0; beat < 4; ++beat) {
      for (int p : progression[static_cast<std::size_t>(beat)]) {
        spec.notes.push_back({p, 4.0 * bar + beat, 1.0, 0});
      }
    }
  }
  const auto cg = chroma::encode_score(midi::parse_smf(write_midi_fixture(spec)), Rational(1, 1), 0.1);
  ASSERT_EQ(cg.length(), 16u);
  const auto key = key::find_key(key::average_chroma(cg.codewords));
  EXPECT_EQ(key.name(), "Gmaj");
  const auto t = key::transpose(cg, key);
  corpus::FrequencyTable table;
  table.add(t.codewords);
  EXPECT_EQ(table.ranked().front().first.bits(), "100010010000");
}

TEST(MidiCorpus, DeterministicAndParsable) {
  MidiCorpusSpec spec;
  spec.composers = 4;
  spec.seed = 21;
  const auto a = synth_midi_corpus(spec);
  const auto b = synth_midi_corpus(spec);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_GE(a.size(), 4u * static_cast<std::size_t>(spec.min_pieces));
  ASSERT_LE(a.size(), 4u * static_cast<std::size_t>(spec.max_pieces));
  std::set<std::string> composers;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].entry, b[i].entry);
    const auto bytes = write_midi_fixture(a[i].fixture);
    EXPECT_EQ(bytes, write_midi_fixture(b[i].fixture));
    EXPECT_EQ(midi::parse_smf(bytes).notes, expected_notes(a[i].fixture));
    EXPECT_LT(a[i].entry.birth, a[i].entry.death);
    composers.insert(a[i].entry.composer);
  }
  EXPECT_EQ(composers.size(), 4u);
  spec.seed = 22;
  EXPECT_NE(write_midi_fixture(synth_midi_corpus(spec).front().fixture), write_midi_fixture(a.front().fixture));
}

}  // namespace
