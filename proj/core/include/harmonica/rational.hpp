#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace harmonica {

/// Positive rational number in lowest terms. Used for the frame length
/// expressed in beats (0.5, 1, 1.5, 4, ...), so that tick arithmetic stays
/// exact.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  /// Accepts "3/2", "1.5", "4". Throws Error(InvalidSpec) on anything that is
  /// not a strictly positive finite value.
  static Rational parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "1", "3/2": the canonical form written to cache headers.
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

}  // namespace harmonica
