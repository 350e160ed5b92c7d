#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "semistab/errors.hpp"
#include "semistab/experiments.hpp"
#include "semistab/format.hpp"
#include "semistab/semigroup.hpp"

namespace semistab {
namespace {

const Check* find_check(const StudyReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Table* find_table(const StudyReport& r, const std::string& name) {
  for (const auto& t : r.tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

double number(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return parse_double(std::get<std::string>(c));
}

std::string csv_of(const StudyReport& r) {
  std::ostringstream out;
  for (const auto& t : r.tables) t.write_csv(out);
  return out.str();
}

TEST(GapVsBox, FreeOperatorMatchesTheClosedForm) {
  const Potential v(1.0, 1, Potential::Constant{0.0});
  const StudyReport r = gap_vs_box(v, GapVsBoxParams{{40.0, 10.0, 20.0}, 0.1});
  EXPECT_TRUE(r.all_passed()) << r.summary();
  ASSERT_NE(find_check(r, "free_closed_form"), nullptr);
  const Table* t = find_table(r, "gap_vs_box");
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->rows.size(), 4U);
  // Rows are sorted by L, and the last row is the never-computed limit.
  for (std::size_t i = 0; i < 3; ++i) {
    const double L = number(t->rows[i][0]);
    const auto want = oracle::dirichlet_spectrum(static_cast<int>(std::lround(2 * L / 0.1)) - 1, 0.1L);
    EXPECT_LE(oracle::relative_error(number(t->rows[i][2]), want.front()), 1e-9);
  }
  EXPECT_EQ(std::get<std::string>(t->rows[3][0]), "inf");
  EXPECT_EQ(std::get<std::string>(t->rows[3][2]), "extrapolated");
  // Doubling L roughly quarters the gap.
  EXPECT_NEAR(number(t->rows[0][3]) / number(t->rows[1][3]), 4.0, 0.01);
}

TEST(GapVsBox, SquareWellIsMonotoneAndBracketed) {
  const Potential v(1.0, 1, Potential::SquareWell{1.0, 1.0});
  const StudyReport r = gap_vs_box(v, GapVsBoxParams{});
  EXPECT_TRUE(r.all_passed()) << r.summary();
  EXPECT_EQ(find_check(r, "free_closed_form"), nullptr);
}

TEST(GapVsBox, RequiresBoundedSupport) {
  const Potential v(1.0, 1, Potential::GaussianWell{1.0, 1.0});
  EXPECT_THROW((void)gap_vs_box(v, GapVsBoxParams{}), DomainError);
}

TEST(ExponentTable, DefaultRowsPassAndCellsRecompute) {
  const StudyReport r = exponent_table(ExponentTableParams{}, 4);
  EXPECT_TRUE(r.all_passed()) << r.summary();
  const Table* t = find_table(r, "exponent_table");
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->rows.size(), 7U);
  // Re-derive five random cells from the module operations.
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<std::size_t> pick_row(0, t->rows.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_col(3, 6);
  for (int i = 0; i < 5; ++i) {
    const auto& row = t->rows[pick_row(rng)];
    const std::size_t col = pick_col(rng);
    const double p = number(row[1]);
    const SpectralMeasure mu = std::get<std::string>(row[0]) == "f-delta" ? SpectralMeasure(DensityMeasure::f_delta(p))
                                                                          : SpectralMeasure(DensityMeasure::power_law(p));
    double want = 0.0;
    if (col <= 4) {
      const auto s = scaling_exponents(mu, 1e-6, 0.1, 64);
      want = (col == 3 ? s.d_minus : s.d_plus).value();
    } else {
      const auto d = decay_exponents(evolve_norms(mu, 10.0, 1e6, 200));
      want = (col == 5 ? d.liminf : d.limsup).value();
    }
    EXPECT_EQ(number(row[col]), want) << "column " << t->columns[col];
  }
  // The analytic column for delta = 0.75 is 2.5.
  EXPECT_EQ(number(t->rows[1][2]), 2.5);
}

TEST(ExponentTable, EmptyDeltaListLeavesPowerLawsOnly) {
  ExponentTableParams p;
  p.deltas.clear();
  const StudyReport r = exponent_table(p);
  EXPECT_EQ(find_table(r, "exponent_table")->rows.size(), p.gammas.size());
  ASSERT_EQ(r.notes.size(), 1U);
}

TEST(ExponentTable, RejectsDeltaOutsideTheOpenInterval) {
  for (const double d : {0.5, 1.0, 0.2}) {
    ExponentTableParams p;
    p.deltas = {d};
    EXPECT_THROW((void)exponent_table(p), DomainError) << d;
  }
  ExponentTableParams p;
  p.gammas = {0.0};
  EXPECT_THROW((void)exponent_table(p), DomainError);
}

TEST(Section3Study, PassesAndFailsWhenTightened) {
  Section3Params p;
  p.measures = 20;
  p.shifted_measures = 10;
  const StudyReport ok = section3_bounds(p, 1);
  EXPECT_TRUE(ok.all_passed()) << ok.summary();
  const StudyReport tight = section3_bounds(p, 1, 1, 0.9);
  EXPECT_FALSE(find_check(tight, "range_bound")->passed);
  EXPECT_FALSE(find_check(tight, "equality_witness")->passed);
}

TEST(GdeltaWitness, ControlRunNotesNoOscillation) {
  GdeltaWitnessParams p;
  p.exponents = {1.0};
  p.expect = "none";
  p.alpha = 0.4;
  p.n_t = 400;
  const StudyReport r = gdelta_witness(p);
  EXPECT_TRUE(r.all_passed()) << r.summary();
  ASSERT_EQ(r.notes.size(), 1U);
  EXPECT_EQ(r.notes[0], "no oscillation witness at this horizon");
  ASSERT_EQ(r.artifacts.size(), 1U);
  EXPECT_EQ(r.artifacts[0].file_name, "witness_measure.txt");
}

TEST(GdeltaWitness, RejectsShortHorizons) {
  GdeltaWitnessParams p;
  p.t_min = 1.0;
  p.t_max = 50.0;
  EXPECT_THROW((void)gdelta_witness(p), DomainError);
  p.t_min = 10.0;
  p.t_max = 500.0;
  EXPECT_THROW((void)gdelta_witness(p), DomainError);
}

TEST(Approximation, SmallRunSatisfiesItsChecks) {
  const Potential v(1.0, 1, Potential::GaussianWell{1.0, 1.0});
  ApproximationParams p;
  p.half_width = 5.0;
  p.spacing = 0.1;
  p.truncation_indices = {1, 2, 3, 4, 5};
  p.shift_indices = {1, 2, 3};
  const StudyReport r = approximation_study(v, p, 3, 2);
  for (const auto& c : r.checks) {
    if (c.name == "truncation.metric_target") continue;  // k = 5 does not reach 1e-3 at this size
    EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  }
  const Table* shift = find_table(r, "shift");
  ASSERT_NE(shift, nullptr);
  for (const auto& row : shift->rows) EXPECT_LE(number(row[3]), -1.0 / (number(row[0]) + 1.0));
}

TEST(Determinism, IdenticalConfigGivesIdenticalCsv) {
  const StudyConfig c = parse_study_config(
      "[study]\nkind = section3-bounds\nseed = 5\n[section3]\nmeasures = 10\nshifted_measures = 5\n");
  const std::string one = csv_of(run_study(c, RunOptions{1}));
  const std::string many = csv_of(run_study(c, RunOptions{6}));
  EXPECT_EQ(one, many);
  EXPECT_EQ(one, csv_of(run_study(c)));
  StudyConfig other = c;
  other.seed = 6;
  EXPECT_NE(one, csv_of(run_study(other)));
}

TEST(ProbeVectors, SeededAndNormalized) {
  const auto a = probe_vectors(50, 3, 7);
  const auto b = probe_vectors(50, 3, 7);
  ASSERT_EQ(a.size(), 3U);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_NEAR(a[i].norm(), 1.0, 1e-15);
  }
  EXPECT_NE(a[0], a[1]);
}

}  // namespace
}  // namespace semistab
