#include "harmonica/heaps.hpp"

#include <algorithm>
#include <cmath>

#include "harmonica/error.hpp"

namespace harmonica::heaps {

namespace {

struct Regression {
  double slope = 0;
  double intercept = 0;
  double rho = 0;
  double sigma_y = 0;
  double sigma_resid = 0;
  double slope_stderr = 0;
};

// Two-pass centered OLS. Callers have already checked n >= 3.
Regression regress(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0)) throw Error(Errc::DegenerateX, "all x values are equal");

  Regression r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.rho = syy > 0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
  r.sigma_y = std::sqrt(syy / n);
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - r.intercept - r.slope * x[i];
    ss_res += e * e;
  }
  r.sigma_resid = std::sqrt(ss_res / n);
  r.slope_stderr = x.size() > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return r;
}

}  // namespace

HeapsFit fit_heaps(std::span<const Point> points) {
  std::vector<double> x, y;
  x.reserve(points.size());
  y.reserve(points.size());
  HeapsFit fit;
  for (const auto& p : points) {
    if (!(p.tokens > 0) || !(p.types > 0)) {
      ++fit.excluded;
      continue;
    }
    x.push_back(std::log10(p.tokens));
    y.push_back(std::log10(p.types));
  }
  if (x.size() < 3) {
    throw Error(Errc::TooFewPoints, "Heaps fit needs at least 3 datasets, have " + std::to_string(x.size()));
  }
  const auto r = regress(x, y);
  fit.alpha = r.slope;
  fit.log10K = r.intercept;
  fit.rho = r.rho;
  fit.sigma_y = r.sigma_y;
  // Residual route rather than sigma_y * sqrt(1 - rho^2): identical in exact
  // arithmetic, but it does not cancel catastrophically when |rho| -> 1.
  fit.sigma_c = r.sigma_resid;
  fit.alpha_stderr = r.slope_stderr;
  fit.n_points = x.size();
  return fit;
}

double richness(double types, double tokens, const HeapsFit& fit) {
  if (!(fit.sigma_c > 1e-12 * std::max(1.0, fit.sigma_y))) {
    throw Error(Errc::ZeroSigmaC, "collinear corpus: relative richness undefined");
  }
  if (!(types > 0) || !(tokens > 0)) {
    throw Error(Errc::DomainError, "richness needs L > 0 and V > 0");
  }
  return (std::log10(types) - fit.log10K - fit.alpha * std::log10(tokens)) / fit.sigma_c;
}

void fill_richness(std::span<vocab::MetricsRow> rows, const HeapsFit& fit) {
  for (auto& row : rows) {
    if (row.tokens >= 1 && row.types >= 1) {
      row.richness = richness(static_cast<double>(row.types), static_cast<double>(row.tokens), fit);
    } else {
      row.richness.reset();
    }
  }
}

TrendFit fit_trend(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(Errc::InvalidSpec, "trend inputs differ in length");
  if (xs.size() < 3) throw Error(Errc::TooFewPoints, "trend needs at least 3 points");
  const auto r = regress(xs, ys);
  TrendFit t;
  t.slope_per_century = r.slope * 100.0;
  t.intercept = r.intercept;
  t.rho = r.rho;
  t.slope_stderr_per_century = r.slope_stderr * 100.0;
  t.n_points = xs.size();
  return t;
}

}  // namespace harmonica::heaps
