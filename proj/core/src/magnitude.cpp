#include "semistab/magnitude.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "semistab/errors.hpp"
#include "semistab/format.hpp"

namespace semistab {

namespace {

constexpr std::int64_t kMinNormalExponent = -1021;  // 0.5 * 2^-1021 = DBL_MIN
constexpr std::int64_t kMaxExponent = 1024;

}  // namespace

Magnitude Magnitude::normalized(double mantissa, std::int64_t exponent) {
  if (mantissa == 0.0) return {};
  int e = 0;
  const double m = std::frexp(mantissa, &e);
  return {m, exponent + e};
}

Magnitude Magnitude::from_double(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DomainError("Magnitude requires a finite non-negative value, got " + format_double(value));
  }
  return normalized(value, 0);
}

Magnitude Magnitude::from_log(double log_value) {
  if (std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity()) {
    throw DomainError("Magnitude::from_log: argument must be finite or -inf");
  }
  if (log_value == -std::numeric_limits<double>::infinity()) return {};
  // Split off an integral power of two first so exp() never leaves range.
  const double e2 = std::floor(log_value / std::numbers::ln2);
  const double rest = log_value - e2 * std::numbers::ln2;
  return normalized(std::exp(rest), static_cast<std::int64_t>(e2));
}

Magnitude Magnitude::pow2(std::int64_t exponent) { return {0.5, exponent + 1}; }

Magnitude Magnitude::parse(std::string_view text) {
  const auto fail = [&] { return ParseError("malformed magnitude '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  auto p_pos = text.find_first_of("pP");
  if (text.size() > 1 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    p_pos = std::string_view::npos;  // leave hex floats to from_chars
  }
  double mantissa = 0.0;
  std::int64_t exp2 = 0;
  const std::string_view mant_text = text.substr(0, p_pos);
  {
    auto [ptr, ec] = std::from_chars(mant_text.data(), mant_text.data() + mant_text.size(), mantissa);
    if (ec != std::errc() || ptr != mant_text.data() + mant_text.size()) {
      // from_chars rejects a leading '+'; accept it for convenience.
      if (!mant_text.empty() && mant_text[0] == '+') return parse(text.substr(1));
      throw fail();
    }
  }
  if (p_pos != std::string_view::npos) {
    std::string_view exp_text = text.substr(p_pos + 1);
    if (!exp_text.empty() && exp_text[0] == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exp2);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) throw fail();
  }
  if (!std::isfinite(mantissa) || mantissa < 0.0) throw fail();
  Magnitude m = normalized(mantissa, 0);
  if (!m.is_zero()) m.exponent_ += exp2;
  return m;
}

double Magnitude::log() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(mantissa_) + static_cast<double>(exponent_) * std::numbers::ln2;
}

double Magnitude::to_double() const {
  if (is_zero()) return 0.0;
  if (exponent_ > kMaxExponent) return std::numeric_limits<double>::infinity();
  if (exponent_ < -1100) return 0.0;
  return std::ldexp(mantissa_, static_cast<int>(exponent_));
}

bool Magnitude::fits_double() const {
  return is_zero() || (exponent_ >= kMinNormalExponent && exponent_ <= kMaxExponent);
}

std::string Magnitude::to_string() const {
  if (fits_double()) return format_double(to_double());
  return format_double(mantissa_) + "p" + std::to_string(exponent_);
}

Magnitude Magnitude::pow(double p) const {
  if (p == 0.0) return from_double(1.0);
  if (is_zero()) {
    if (p < 0.0) throw DomainError("Magnitude::pow: zero to a negative power");
    return {};
  }
  return from_log(p * log());
}

Magnitude operator*(Magnitude a, Magnitude b) {
  if (a.is_zero() || b.is_zero()) return {};
  return Magnitude::normalized(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

Magnitude operator/(Magnitude a, Magnitude b) {
  if (b.is_zero()) throw DomainError("Magnitude: division by zero");
  if (a.is_zero()) return {};
  return Magnitude::normalized(a.mantissa_ / b.mantissa_, a.exponent_ - b.exponent_);
}

Magnitude operator+(Magnitude a, Magnitude b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exponent_ < b.exponent_) std::swap(a, b);
  const std::int64_t shift = a.exponent_ - b.exponent_;
  if (shift > 1100) return a;
  const double sum = a.mantissa_ + std::ldexp(b.mantissa_, -static_cast<int>(shift));
  return Magnitude::normalized(sum, a.exponent_);
}

std::strong_ordering operator<=>(const Magnitude& a, const Magnitude& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) return std::strong_ordering::equal;
    return a.is_zero() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.exponent_ != b.exponent_) return a.exponent_ <=> b.exponent_;
  if (a.mantissa_ < b.mantissa_) return std::strong_ordering::less;
  if (a.mantissa_ > b.mantissa_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace semistab
