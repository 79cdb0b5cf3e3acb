#include "harmonica/vocab.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "harmonica/error.hpp"

namespace harmonica::vocab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_tokens(const corpus::FrequencyTable& table) {
  if (table.tokens() == 0) throw Error(Errc::EmptyTable, "table has no tokens");
}

void require_types(std::uint64_t tokens, std::uint64_t types) {
  if (types < 1 || types > tokens) {
    throw Error(Errc::DomainError,
                "need 1 <= V <= L, got L=" + std::to_string(tokens) + " V=" + std::to_string(types));
  }
}

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::string cell(double v) {
  if (!std::isfinite(v)) return {};
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

double entropy(const corpus::FrequencyTable& table) {
  require_tokens(table);
  const double total = static_cast<double>(table.tokens());
  CompensatedSum sum;
  table.for_each([&](chroma::Codeword, std::uint64_t n) {
    const double p = static_cast<double>(n) / total;
    sum.add(-p * std::log2(p));
  });
  return std::max(0.0, sum.value());
}

double mean_filling(const corpus::FrequencyTable& table) {
  require_tokens(table);
  std::uint64_t weighted = 0;
  table.for_each([&](chroma::Codeword w, std::uint64_t n) { weighted += n * static_cast<std::uint64_t>(w.filling()); });
  return static_cast<double>(weighted) / static_cast<double>(table.tokens());
}

double ttr(std::uint64_t tokens, std::uint64_t types) {
  require_types(tokens, types);
  return static_cast<double>(types) / static_cast<double>(tokens);
}

double guiraud(std::uint64_t tokens, std::uint64_t types) {
  require_types(tokens, types);
  return static_cast<double>(types) / std::sqrt(static_cast<double>(tokens));
}

double herdan(std::uint64_t tokens, std::uint64_t types) {
  if (tokens < 2) throw Error(Errc::DomainError, "Herdan's index needs L >= 2");
  require_types(tokens, types);
  return std::log10(static_cast<double>(types)) / std::log10(static_cast<double>(tokens));
}

double composer_year(int birth, int death) {
  if (birth >= death) {
    throw Error(Errc::InvalidYears, std::to_string(birth) + " is not before " + std::to_string(death));
  }
  return (static_cast<double>(birth) + 20.0 + static_cast<double>(death)) / 2.0;
}

MetricsRow compute_metrics(const corpus::ComposerDataset& ds) {
  MetricsRow row;
  row.composer = ds.label;
  row.year = composer_year(ds.birth, ds.death);
  row.pieces = ds.pieces;
  row.tokens = ds.table.tokens();
  row.types = ds.table.types();
  const bool any = row.tokens >= 1;
  row.ttr = any ? ttr(row.tokens, row.types) : kNaN;
  row.guiraud = any ? guiraud(row.tokens, row.types) : kNaN;
  row.herdan = row.tokens >= 2 ? herdan(row.tokens, row.types) : kNaN;
  row.entropy_bits = any ? entropy(ds.table) : kNaN;
  row.mean_filling = any ? mean_filling(ds.table) : kNaN;
  return row;
}

std::string format_metrics_csv(std::span<const MetricsRow> rows) {
  std::string out = "composer,year,pieces,L,V,ttr,guiraud,herdan,entropy_bits,mean_filling,richness\n";
  for (const auto& r : rows) {
    out += corpus::csv_field(r.composer) + ',' + cell(r.year) + ',' + std::to_string(r.pieces) + ',' +
           std::to_string(r.tokens) + ',' + std::to_string(r.types) + ',' + cell(r.ttr) + ',' +
           cell(r.guiraud) + ',' + cell(r.herdan) + ',' + cell(r.entropy_bits) + ',' +
           cell(r.mean_filling) + ',' + (r.richness ? cell(*r.richness) : std::string()) + '\n';
  }
  return out;
}

}  // namespace harmonica::vocab
