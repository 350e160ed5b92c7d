#include "semistab/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <fstream>
#include <ostream>
#include <sstream>

#include "semistab/errors.hpp"
#include "semistab/format.hpp"
#include "semistab/version.hpp"

namespace semistab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << content;
  if (!out) throw ResourceError("write failed for " + path.string());
}

}  // namespace

std::string format_cell(const Cell& cell) {
  return std::visit(Overloaded{[](double v) -> std::string {
                                 if (std::isnan(v)) return "failed:nan";
                                 if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
                                 return format_double(v);
                               },
                               [](std::int64_t v) { return std::to_string(v); },
                               [](const std::string& v) { return v; }},
                    cell);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InvariantViolation("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_escape(columns[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(format_cell(row[i]));
    out << '\n';
  }
}

Table& StudyReport::add_table(std::string name, std::vector<std::string> columns) {
  tables.push_back(Table{std::move(name), std::move(columns), {}});
  return tables.back();
}

void StudyReport::add_check(std::string name, bool passed, std::string detail) {
  checks.push_back(Check{std::move(name), passed, std::move(detail)});
}

bool StudyReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string StudyReport::summary() const {
  std::ostringstream out;
  out << "study " << study << '\n';
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  for (const auto& n : notes) out << "NOTE " << n << '\n';
  out << "RESULT " << (all_passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

void StudyReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& t : tables) {
    std::ostringstream csv;
    t.write_csv(csv);
    write_file(dir / (t.name + ".csv"), csv.str());
  }
  for (const auto& a : artifacts) write_file(dir / a.file_name, a.content);
  write_file(dir / "summary.txt", summary());

  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream prov;
  prov << "semistab " << kVersion << '\n';
  prov << "generated " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
  prov << "--- config ---\n" << config_echo;
  if (!config_echo.empty() && config_echo.back() != '\n') prov << '\n';
  write_file(dir / "provenance.txt", prov.str());
}

}  // namespace semistab
