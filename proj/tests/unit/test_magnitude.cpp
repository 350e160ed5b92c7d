#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "semistab/errors.hpp"
#include "semistab/extended_real.hpp"
#include "semistab/format.hpp"
#include "semistab/magnitude.hpp"

namespace semistab {
namespace {

TEST(Magnitude, DoubleRoundTripIsExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, exponent(rng));
    const Magnitude m = Magnitude::from_double(x);
    EXPECT_EQ(m.to_double(), x);
    EXPECT_EQ(parse_double(m.to_string()), x);
    EXPECT_EQ(Magnitude::parse(m.to_string()), m);
  }
}

TEST(Magnitude, ValuesBeyondDoubleRangeKeepTheirExponent) {
  const Magnitude tiny = Magnitude::pow2(-4096);
  EXPECT_FALSE(tiny.fits_double());
  EXPECT_EQ(tiny.to_double(), 0.0);
  EXPECT_NEAR(tiny.log(), -4096.0 * std::log(2.0), 1e-9);
  EXPECT_EQ(tiny.to_string(), "0.5p-4095");
  EXPECT_EQ(Magnitude::parse(tiny.to_string()), tiny);
  EXPECT_EQ(Magnitude::parse("1p-4096"), tiny);
}

TEST(Magnitude, ArithmeticMatchesLogs) {
  const Magnitude a = Magnitude::pow2(-3000);
  const Magnitude b = Magnitude::from_double(3.0);
  EXPECT_NEAR((a * b).log(), a.log() + std::log(3.0), 1e-12 * std::fabs(a.log()));
  EXPECT_NEAR((a / b).log(), a.log() - std::log(3.0), 1e-12 * std::fabs(a.log()));
  EXPECT_EQ((b + Magnitude()).to_double(), 3.0);
  EXPECT_EQ((b + b).to_double(), 6.0);
  // Adding a value 2^-3000 times smaller leaves b unchanged.
  EXPECT_EQ((b + a).to_double(), 3.0);
  EXPECT_NEAR(a.pow(0.5).log(), 0.5 * a.log(), 1e-9);
  EXPECT_LT(a, b);
  EXPECT_GT(b, a);
  EXPECT_LT(Magnitude(), a);
}

TEST(Magnitude, FromLogCoversTheWholeRange) {
  for (const double l : {-1e6, -745.5, -1.0, 0.0, 2.5, 800.0}) {
    EXPECT_NEAR(Magnitude::from_log(l).log(), l, 1e-12 * std::max(1.0, std::fabs(l)));
  }
  EXPECT_TRUE(Magnitude::from_log(-std::numeric_limits<double>::infinity()).is_zero());
}

TEST(Magnitude, RejectsInvalidInput) {
  EXPECT_THROW((void)Magnitude::from_double(-1.0), DomainError);
  EXPECT_THROW((void)Magnitude::from_double(std::nan("")), DomainError);
  EXPECT_THROW((void)Magnitude::parse("abc"), ParseError);
  EXPECT_THROW((void)Magnitude::parse("1p"), ParseError);
  EXPECT_THROW((void)Magnitude::parse("-2"), ParseError);
  EXPECT_THROW((void)(Magnitude::from_double(1.0) / Magnitude()), DomainError);
}

TEST(ExtendedReal, OrderingAndText) {
  const auto pinf = ExtendedReal::plus_infinity();
  const auto minf = ExtendedReal::minus_infinity();
  const auto one = ExtendedReal::finite(1.0);
  EXPECT_LT(minf, one);
  EXPECT_LT(one, pinf);
  EXPECT_EQ(pinf.to_string(), "inf");
  EXPECT_EQ(minf.to_string(), "-inf");
  EXPECT_EQ(ExtendedReal::finite(0.1).to_string(), "0.1");
  EXPECT_THROW((void)pinf.value(), std::logic_error);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
}

TEST(Format, Lists) {
  EXPECT_EQ(parse_index_list("1-4"), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(parse_index_list("2..3"), (std::vector<int>{2, 3}));
  EXPECT_EQ(parse_index_list("5, 7 9"), (std::vector<int>{5, 7, 9}));
  EXPECT_EQ(parse_double_list("0.5, 4"), (std::vector<double>{0.5, 4.0}));
  EXPECT_THROW((void)parse_index_list("4-1"), ParseError);
  EXPECT_THROW((void)parse_double("1.5x"), ParseError);
}

}  // namespace
}  // namespace semistab
