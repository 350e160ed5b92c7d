#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "semistab/errors.hpp"
#include "semistab/measure_io.hpp"

namespace semistab {
namespace {

const std::filesystem::path kData = std::filesystem::path(SEMISTAB_SOURCE_DIR) / "data";

TEST(MeasureIo, AtomicRoundTripIsExact) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = AtomicMeasure::from_pairs(oracle::random_atoms(rng, 1 + trial % 7, 0.0, 100.0));
    const std::string text = format_measure(mu);
    const auto back = std::get<AtomicMeasure>(parse_measure(text));
    ASSERT_EQ(back.size(), mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      EXPECT_EQ(back.atoms()[i].distance, mu.atoms()[i].distance);
      EXPECT_EQ(back.atoms()[i].weight, mu.atoms()[i].weight);
    }
    EXPECT_EQ(format_measure(back), text);
  }
}

TEST(MeasureIo, LacunaryRoundTripBeyondDoubleRange) {
  const std::vector<double> e{0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4};
  const auto mu = lacunary_measure(0.5, e, 12);
  const auto back = std::get<AtomicMeasure>(parse_measure(format_measure(mu)));
  ASSERT_EQ(back.size(), 12U);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(back.atoms()[i].distance, mu.atoms()[i].distance);
    EXPECT_EQ(back.atoms()[i].weight, mu.atoms()[i].weight);
  }
}

TEST(MeasureIo, DensityFamiliesRoundTrip) {
  for (const auto& mu : {DensityMeasure::f_delta(0.75), DensityMeasure::power_law(2.0),
                         DensityMeasure::uniform(0.5, 2.0, 3.0)}) {
    const auto back = std::get<DensityMeasure>(parse_measure(format_measure(mu)));
    EXPECT_EQ(back.s_lo(), mu.s_lo());
    EXPECT_EQ(back.s_hi(), mu.s_hi());
    EXPECT_DOUBLE_EQ(back.total_mass(), mu.total_mass());
    EXPECT_DOUBLE_EQ(ball_mass(SpectralMeasure(back), 0.7), ball_mass(SpectralMeasure(mu), 0.7));
  }
}

TEST(MeasureIo, SampledDensityRoundTrip) {
  const auto mu = DensityMeasure::sampled({0.0, 0.5, 2.0}, {1.0, 3.0, 0.5});
  const std::string text = format_measure(mu);
  const auto back = std::get<DensityMeasure>(parse_measure(text));
  EXPECT_EQ(format_measure(back), text);
  EXPECT_DOUBLE_EQ(back.density(1.0), mu.density(1.0));
}

TEST(MeasureIo, LoadsShippedFiles) {
  const auto two = std::get<AtomicMeasure>(load_measure(kData / "two_atoms.txt"));
  EXPECT_EQ(two.size(), 2U);
  const auto fd = std::get<DensityMeasure>(load_measure(kData / "f_delta_075.txt"));
  EXPECT_NEAR(fd.total_mass(), 0.4, 1e-12);
  const auto zero = std::get<AtomicMeasure>(load_measure(kData / "atom_at_zero.txt"));
  EXPECT_TRUE(zero.atoms()[0].distance.is_zero());
}

TEST(MeasureIo, RejectsMalformedRecords) {
  EXPECT_THROW((void)parse_measure(""), ParseError);
  EXPECT_THROW((void)parse_measure("atomic 2 1\n-1 1\n"), ParseError);
  EXPECT_THROW((void)parse_measure("atomic 1 2\n-1 1\n"), ParseError);
  EXPECT_THROW((void)parse_measure("atomic 1 1\n-1 1 extra\n"), ParseError);
  EXPECT_THROW((void)parse_measure("atomic 1 1\nx 1\n"), ParseError);
  EXPECT_THROW((void)parse_measure("density 0 0 1 0.4\nfamily unknown 1\n"), ParseError);
  EXPECT_THROW((void)parse_measure("gaussian 1\n"), ParseError);
  EXPECT_THROW((void)load_measure(kData / "does_not_exist.txt"), ParseError);
}

TEST(MeasureIo, RejectsAtomsOutsideTheHalfLine) {
  EXPECT_THROW((void)parse_measure("atomic 1 1\n1 1\n"), ParseError);
  EXPECT_THROW((void)parse_measure("atomic 1 1\n-1 -1\n"), ParseError);
}

}  // namespace
}  // namespace semistab
