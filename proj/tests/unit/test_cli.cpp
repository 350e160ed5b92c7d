#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "semistab/format.hpp"

namespace semistab::cli {
namespace {

const std::filesystem::path kRoot(SEMISTAB_SOURCE_DIR);

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return (kRoot / "data" / name).string(); }
std::string config(const std::string& name) { return (kRoot / "configs" / name).string(); }

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("semistab_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

TEST(Cli, ClassifyTwoAtoms) {
  const Result r = call({"classify", data("two_atoms.txt")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("ExponentiallyStable gap=1 rate=1", 0), 0U) << r.out;
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ClassifyAtomAtZero) {
  const Result r = call({"classify", data("atom_at_zero.txt")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("NotStable", 0), 0U);
}

TEST(Cli, MeasureExponentsOfFDelta) {
  const Result r = call({"measure", "exponents", data("f_delta_075.txt"), "--window", "1e-6,0.1", "--scales", "64"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "d_minus,d_plus,eps_min,eps_max,n_scales");
  const auto fields = split_list(row);
  ASSERT_EQ(fields.size(), 5U);
  EXPECT_NEAR(parse_double(fields[0]), 2.5, 1e-3);
  EXPECT_NEAR(parse_double(fields[1]), 2.5, 1e-3);
}

TEST(Cli, MeasureDecayAndBallMass) {
  const Result d = call({"measure", "decay", data("power_law_2.txt"), "--tmin", "10", "--tmax", "1e6"});
  ASSERT_EQ(d.code, kExitOk) << d.err;
  EXPECT_EQ(d.out.rfind("liminf,limsup,", 0), 0U);
  const Result b = call({"measure", "ball-mass", data("two_atoms.txt"), "--eps", "1.5"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(b.out, "eps,mass\n1.5,0.5\n");
}

TEST(Cli, EvolveWritesTheOrbitCsv) {
  const auto dir = scratch("evolve");
  std::filesystem::create_directories(dir);
  const auto file = dir / "orbit.csv";
  const Result r = call({"evolve", data("two_atoms.txt"), "--tmin", "0.1", "--tmax", "10", "--nt", "5", "--out",
                         file.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,log_norm_sq,ratio");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 5);
  std::filesystem::remove_all(dir);
}

TEST(Cli, OperatorSpectrum) {
  const Result r = call({"operator", "spectrum", data("free.pot"), "--L", "1", "--h", "0.25"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("index,eigenvalue\n", 0), 0U);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 8);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(call({}).code, kExitUsage);
  EXPECT_EQ(call({"bogus"}).code, kExitUsage);
  const Result unknown = call({"classify", data("two_atoms.txt"), "--nope"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_TRUE(unknown.out.empty());
  EXPECT_EQ(call({"classify", data("missing.txt")}).code, kExitUsage);
  EXPECT_EQ(call({"measure", "exponents", data("two_atoms.txt"), "--window", "1"}).code, kExitUsage);
  EXPECT_EQ(call({"study", config("missing.cfg")}).code, kExitUsage);
}

TEST(Cli, HelpAndVersionExitZero) {
  EXPECT_EQ(call({"--help"}).code, kExitOk);
  EXPECT_EQ(call({"--version"}).code, kExitOk);
  EXPECT_EQ(call({"operator", "spectrum", "--help"}).code, kExitOk);
}

TEST(Cli, Section3StudyPasses) {
  const auto dir = scratch("s3");
  const Result r = call({"study", config("section3-bounds.cfg"), "--out", dir.string()});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("RESULT PASS"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "range_bound.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "provenance.txt"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, InjectedTighterBoundFails) {
  const auto dir = scratch("s3_tight");
  const Result r = call({"study", config("section3-bounds.cfg"), "--out", dir.string(), "--inject-bound-scale", "0.9"});
  EXPECT_EQ(r.code, kExitContractViolation);
  EXPECT_NE(r.out.find("FAIL range_bound"), std::string::npos);
  EXPECT_NE(r.out.find("RESULT FAIL"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, EnvironmentSetsTheDefaultOutputDirectory) {
  const auto dir = scratch("env");
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "no_output.cfg";
  std::ofstream(cfg) << "[study]\nkind = exponent-table\n[exponent_table]\ngamma_list = 1\ndelta_list = 0.75\n";
  ::setenv("SEMISTAB_OUTPUT_DIR", dir.string().c_str(), 1);
  const Result r = call({"study", cfg.string()});
  ::unsetenv("SEMISTAB_OUTPUT_DIR");
  ASSERT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "exponent-table" / "exponent_table.csv"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace semistab::cli
