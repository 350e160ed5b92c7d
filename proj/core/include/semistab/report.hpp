#pragma once

// Study reports: named tables written as CSV, PASS/FAIL checks, extra text
// artifacts, and a provenance block. Only provenance.txt carries a
// timestamp, so re-running a study reproduces every CSV byte for byte.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace semistab {

/// Doubles are written with shortest round-trip precision; non-finite values
/// become the tags "+inf", "-inf" and "failed:nan".
using Cell = std::variant<double, std::int64_t, std::string>;

[[nodiscard]] std::string format_cell(const Cell& cell);

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws InvariantViolation when the row width does not match.
  void add_row(std::vector<Cell> row);
  void write_csv(std::ostream& out) const;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Artifact {
  std::string file_name;
  std::string content;
};

struct StudyReport {
  std::string study;
  std::vector<Table> tables;
  std::vector<Check> checks;
  std::vector<Artifact> artifacts;
  std::vector<std::string> notes;
  std::string config_echo;

  Table& add_table(std::string name, std::vector<std::string> columns);
  void add_check(std::string name, bool passed, std::string detail = {});

  [[nodiscard]] bool all_passed() const;

  /// "PASS <name>: <detail>" / "FAIL ..." lines, notes, then "RESULT PASS|FAIL".
  [[nodiscard]] std::string summary() const;

  /// Writes <table>.csv, artifacts, summary.txt and provenance.txt into dir,
  /// creating it if needed.
  void write(const std::filesystem::path& dir) const;
};

}  // namespace semistab
