#pragma once

#include <compare>
#include <string>

namespace semistab {

// Real number or a signed infinity carried as an explicit tag. Exponent
// estimates use +inf for "no mass near 0" and -inf for "below the window
// floor"; the double payload is never used to encode either.
class ExtendedReal {
 public:
  enum class Kind { kFinite, kPlusInfinity, kMinusInfinity };

  constexpr ExtendedReal() = default;
  static ExtendedReal finite(double value);
  static constexpr ExtendedReal plus_infinity() { return ExtendedReal(Kind::kPlusInfinity, 0.0); }
  static constexpr ExtendedReal minus_infinity() { return ExtendedReal(Kind::kMinusInfinity, 0.0); }

  [[nodiscard]] constexpr Kind kind() const { return kind_; }
  [[nodiscard]] constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  [[nodiscard]] constexpr bool is_plus_infinity() const { return kind_ == Kind::kPlusInfinity; }
  [[nodiscard]] constexpr bool is_minus_infinity() const { return kind_ == Kind::kMinusInfinity; }

  // Throws std::logic_error when infinite.
  [[nodiscard]] double value() const;

  // "inf", "-inf" or the shortest round-trip decimal.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b);
  friend std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b);

 private:
  constexpr ExtendedReal(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

}  // namespace semistab
