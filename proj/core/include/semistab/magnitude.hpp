#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace semistab {

/// Non-negative real with an unbounded binary exponent.
///
/// Stored as mantissa * 2^exponent with mantissa in [0.5, 1), or exactly
/// zero. Conversion from and to double is exact whenever the value is
/// representable, so text round trips of ordinary inputs stay bit-exact.
/// Atoms of lacunary measures sit at 2^-4096 and below, which is why the
/// atomic measure keeps positions and weights in this form.
class Magnitude {
 public:
  constexpr Magnitude() = default;

  /// Exact. Throws DomainError for negative or non-finite input.
  static Magnitude from_double(double value);
  /// exp(log_value); log_value = -inf gives zero.
  static Magnitude from_log(double log_value);
  static Magnitude pow2(std::int64_t exponent);

  /// Parses "<decimal>" or "<decimal>p<exp2>" (value = decimal * 2^exp2).
  static Magnitude parse(std::string_view text);

  [[nodiscard]] bool is_zero() const { return mantissa_ == 0.0; }
  [[nodiscard]] double mantissa() const { return mantissa_; }
  [[nodiscard]] std::int64_t exponent() const { return exponent_; }

  /// Natural logarithm; -inf for zero.
  [[nodiscard]] double log() const;
  /// Nearest double; underflows to 0 and overflows to +inf.
  [[nodiscard]] double to_double() const;
  /// True when to_double() is exact and normal (or zero).
  [[nodiscard]] bool fits_double() const;

  /// Shortest decimal for in-range values, "<mantissa>p<exp2>" otherwise.
  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] Magnitude pow(double p) const;

  friend Magnitude operator*(Magnitude a, Magnitude b);
  friend Magnitude operator/(Magnitude a, Magnitude b);
  friend Magnitude operator+(Magnitude a, Magnitude b);
  Magnitude& operator+=(Magnitude other) { return *this = *this + other; }

  friend bool operator==(const Magnitude&, const Magnitude&) = default;
  friend std::strong_ordering operator<=>(const Magnitude& a, const Magnitude& b);

 private:
  Magnitude(double mantissa, std::int64_t exponent) : mantissa_(mantissa), exponent_(exponent) {}
  static Magnitude normalized(double mantissa, std::int64_t exponent);

  double mantissa_ = 0.0;
  std::int64_t exponent_ = 0;
};

}  // namespace semistab
