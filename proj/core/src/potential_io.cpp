#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "semistab/errors.hpp"
#include "semistab/format.hpp"
#include "semistab/potential.hpp"

namespace semistab {

namespace {

class Fields {
 public:
  explicit Fields(const std::map<std::string, std::string>& map) : map_(map) {}

  const std::string& text(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) throw ParseError("potential descriptor: missing key '" + key + "'");
    used_.insert(key);
    return it->second;
  }
  double number(const std::string& key) const { return parse_double(text(key)); }
  double number_or(const std::string& key, double fallback) const {
    return map_.contains(key) ? number(key) : fallback;
  }
  int integer(const std::string& key) const { return static_cast<int>(parse_integer(text(key))); }
  bool has(const std::string& key) const { return map_.contains(key); }

  // Keys that no form consumed are typos; reject them rather than ignore them.
  void reject_unused() const {
    for (const auto& [key, value] : map_) {
      if (!used_.contains(key)) throw ParseError("potential descriptor: unexpected key '" + key + "'");
    }
  }

 private:
  const std::map<std::string, std::string>& map_;
  mutable std::set<std::string> used_;
};

}  // namespace

Potential potential_from_fields(const std::map<std::string, std::string>& map) {
  const Fields f(map);
  const std::string kind(trim(f.text("kind")));
  const double a = f.number("a_bound");
  const int dim = f.has("dim") ? f.integer("dim") : 1;

  std::optional<Potential> v;
  if (kind == "constant") {
    v.emplace(a, dim, Potential::Constant{f.number_or("value", 0.0)});
  } else if (kind == "gaussian-well") {
    v.emplace(a, dim, Potential::GaussianWell{f.number_or("depth", a), f.number_or("width", 1.0)});
  } else if (kind == "exponential-well") {
    v.emplace(a, dim, Potential::ExponentialWell{f.number_or("depth", a), f.number_or("scale", 1.0)});
  } else if (kind == "square-well") {
    v.emplace(a, dim, Potential::SquareWell{f.number_or("depth", a), f.number_or("radius", 1.0)});
  } else if (kind == "sampled") {
    v.emplace(a, dim,
              Potential::Sampled{f.number("origin"), f.number("spacing"), f.integer("points"),
                                 parse_double_list(f.text("values"))});
  } else {
    throw ParseError("potential descriptor: unknown kind '" + kind +
                     "' (expected constant, gaussian-well, exponential-well, square-well or sampled)");
  }
  if (f.has("truncate")) v = truncate_potential(*v, f.integer("truncate"));
  if (f.has("shift")) v = shift_potential(*v, f.integer("shift"), a);
  f.reject_unused();
  return *v;
}

Potential read_potential(std::istream& in) {
  std::map<std::string, std::string> fields;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto space = body.find_first_of(" \t");
    if (space == std::string_view::npos) {
      throw ParseError("potential descriptor, line " + std::to_string(line_no) + ": expected '<key> <value>'");
    }
    const std::string key(body.substr(0, space));
    if (!fields.emplace(key, std::string(trim(body.substr(space)))).second) {
      throw ParseError("potential descriptor, line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return potential_from_fields(fields);
}

Potential parse_potential(const std::string& text) {
  std::istringstream in(text);
  return read_potential(in);
}

Potential load_potential(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open potential file " + path.string());
  return read_potential(in);
}

}  // namespace semistab
