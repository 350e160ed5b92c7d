#include "semistab/extended_real.hpp"

#include <cmath>
#include <stdexcept>

#include "semistab/errors.hpp"
#include "semistab/format.hpp"

namespace semistab {

ExtendedReal ExtendedReal::finite(double value) {
  if (!std::isfinite(value)) throw DomainError("ExtendedReal::finite given a non-finite value");
  return ExtendedReal(Kind::kFinite, value);
}

double ExtendedReal::value() const {
  if (!is_finite()) throw std::logic_error("ExtendedReal::value() on an infinite value");
  return value_;
}

std::string ExtendedReal::to_string() const {
  switch (kind_) {
    case Kind::kPlusInfinity:
      return "inf";
    case Kind::kMinusInfinity:
      return "-inf";
    case Kind::kFinite:
      break;
  }
  return format_double(value_);
}

namespace {

int rank(ExtendedReal::Kind k) {
  switch (k) {
    case ExtendedReal::Kind::kMinusInfinity:
      return -1;
    case ExtendedReal::Kind::kPlusInfinity:
      return 1;
    case ExtendedReal::Kind::kFinite:
      break;
  }
  return 0;
}

}  // namespace

bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
  return a.kind_ == b.kind_ && (!a.is_finite() || a.value_ == b.value_);
}

std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_finite() && b.is_finite()) return a.value_ <=> b.value_;
  return rank(a.kind_) <=> rank(b.kind_);
}

}  // namespace semistab
