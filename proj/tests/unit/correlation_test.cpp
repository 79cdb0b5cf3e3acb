#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "harmonica/correlation.hpp"
#include "harmonica/error.hpp"
#include "oracles.hpp"

namespace {

using namespace harmonica;
using namespace harmonica::heaps;
namespace oracle = harmonica::testing::oracle;

constexpr CorrelationMethod kMethods[] = {CorrelationMethod::Pearson, CorrelationMethod::Spearman,
                                          CorrelationMethod::Kendall};

std::vector<double> random_column(std::mt19937_64& rng, std::size_t n, bool ties) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = ties ? static_cast<double>(rng() % 5) : u(rng);
  return v;
}

TEST(Correlation, Examples) {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> rev = {3, 2, 1};
  EXPECT_DOUBLE_EQ(kendall(x, rev).value, -1.0);
  EXPECT_DOUBLE_EQ(spearman(x, rev).value, -1.0);
  EXPECT_DOUBLE_EQ(pearson(x, rev).value, -1.0);

  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 3);
  EXPECT_DOUBLE_EQ(pearson(x, y).value, 1.0);
  for (auto m : kMethods) EXPECT_DOUBLE_EQ(correlate(x, x, m).value, 1.0);
}

TEST(Correlation, ConstantColumnIsDegenerateZero) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> c = {7, 7, 7, 7};
  for (auto m : kMethods) {
    const auto r = correlate(x, c, m);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(r.degenerate);
    EXPECT_FALSE(correlate(x, x, m).degenerate);
  }
}

TEST(Correlation, AverageRanks) {
  const std::vector<double> v = {10, 20, 20, 5, 20};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 4, 4, 1, 4}));
  EXPECT_TRUE(average_ranks(std::vector<double>{}).empty());
}

TEST(Correlation, KendallMatchesPairwiseOracle) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + rng() % 120;
    const auto x = random_column(rng, n, trial % 2 == 0);
    const auto y = random_column(rng, n, trial % 3 == 0);
    EXPECT_NEAR(kendall(x, y).value, oracle::kendall_tau_b(x, y), 1e-12);
  }
}

TEST(Correlation, SpearmanIsPearsonOnAverageRanks) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 50;
    const auto x = random_column(rng, n, trial % 2 == 0);
    const auto y = random_column(rng, n, false);
    const auto rx = average_ranks(x), ry = average_ranks(y);
    const double expected = oracle::pearson(rx, ry);
    if (std::isnan(expected)) continue;
    EXPECT_NEAR(spearman(x, y).value, expected, 1e-12);
    EXPECT_NEAR(pearson(x, y).value, oracle::pearson(x, y), 1e-12);
  }
}

TEST(Correlation, RankMethodsIgnoreMonotoneTransforms) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 60;
    const auto x = random_column(rng, n, trial % 2 == 0);
    const auto y = random_column(rng, n, false);
    std::vector<double> tx, ty;
    for (double v : x) tx.push_back(std::exp(v / 3.0) + v * v * v);
    for (double v : y) ty.push_back(-std::atan(v));  // decreasing
    for (auto m : {CorrelationMethod::Spearman, CorrelationMethod::Kendall}) {
      EXPECT_NEAR(correlate(tx, y, m).value, correlate(x, y, m).value, 1e-12);
      EXPECT_NEAR(correlate(x, ty, m).value, -correlate(x, y, m).value, 1e-12);
    }
    std::vector<double> ax;
    for (double v : x) ax.push_back(3.5 * v - 100.0);
    EXPECT_NEAR(pearson(ax, y).value, pearson(x, y).value, 1e-12);
  }
}

TEST(Correlation, ValuesStayInUnitInterval) {
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const auto x = random_column(rng, n, true);
    const auto y = random_column(rng, n, true);
    for (auto m : kMethods) {
      const double r = correlate(x, y, m).value;
      EXPECT_GE(r, -1.0);
      EXPECT_LE(r, 1.0);
    }
  }
}

TEST(CorrelationMatrix, SymmetricWithUnitDiagonal) {
  std::mt19937_64 rng(75);
  std::vector<std::vector<double>> cols;
  for (int c = 0; c < 5; ++c) cols.push_back(random_column(rng, 20, c == 2));
  cols.push_back(std::vector<double>(20, 1.0));
  for (auto m : kMethods) {
    const auto mat = correlation_matrix(cols, {"a", "b", "c", "d", "e", "const"}, m);
    EXPECT_EQ(mat.method, m);
    EXPECT_EQ(mat.n_rows, 20u);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      EXPECT_EQ(mat.values[i][i], 1.0);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        EXPECT_EQ(mat.values[i][j], mat.values[j][i]);
        EXPECT_LE(std::abs(mat.values[i][j]), 1.0);
      }
    }
    EXPECT_TRUE(mat.degenerate[0][5]);
    EXPECT_EQ(mat.values[0][5], 0.0);
    EXPECT_FALSE(mat.degenerate[0][1]);
  }
}

TEST(CorrelationMatrix, Errors) {
  const std::vector<std::vector<double>> short_cols = {{1, 2}, {2, 1}};
  try {
    correlation_matrix(short_cols, {"a", "b"}, CorrelationMethod::Pearson);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooFewPoints);
  }
}

vocab::MetricsRow row(double year, std::uint64_t L, std::uint64_t V, double h, std::optional<double> r) {
  vocab::MetricsRow m;
  m.composer = "c" + std::to_string(year);
  m.year = year;
  m.tokens = L;
  m.types = V;
  m.ttr = static_cast<double>(V) / static_cast<double>(L);
  m.guiraud = static_cast<double>(V) / std::sqrt(static_cast<double>(L));
  m.herdan = std::log10(static_cast<double>(V)) / std::log10(static_cast<double>(L));
  m.entropy_bits = h;
  m.mean_filling = h / 2;
  m.richness = r;
  return m;
}

TEST(MetricsCorrelation, LabelsAndListwiseDeletion) {
  std::vector<vocab::MetricsRow> rows = {row(1500, 1000, 100, 3, -1), row(1600, 2000, 300, 4, 0.5),
                                         row(1700, 5000, 400, 5, 0.2), row(1800, 800, 200, 6, 1.1)};
  rows.push_back(row(1900, 10, 5, 1, std::nullopt));
  rows.back().entropy_bits = NAN;
  const auto m = metrics_correlation(rows, CorrelationMethod::Spearman);
  EXPECT_EQ(m.labels, (std::vector<std::string>{"year", "log10_L", "log10_V", "ttr", "guiraud", "herdan",
                                                "entropy_bits", "mean_filling", "richness"}));
  EXPECT_EQ(m.n_rows, 4u);
  EXPECT_DOUBLE_EQ(m.values[0][6], 1.0);  // entropy rises with year

  for (auto& r : rows) r.richness.reset();
  rows.pop_back();
  const auto no_r = metrics_correlation(rows, CorrelationMethod::Pearson);
  EXPECT_EQ(no_r.labels.size(), 8u);
  EXPECT_EQ(to_string(CorrelationMethod::Kendall), "kendall");
}

}  // namespace
