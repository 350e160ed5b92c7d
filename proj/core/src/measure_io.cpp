#include "semistab/measure_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "semistab/errors.hpp"
#include "semistab/format.hpp"

namespace semistab {

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  // Next non-blank line with comments stripped, split into fields.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      fields = split_list(line);
      if (!fields.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("measure record, line " + std::to_string(line_no) + ": " + what);
  }
};

std::size_t parse_count(LineReader& r, const std::string& text) {
  long long n = 0;
  try {
    n = parse_integer(text);
  } catch (const ParseError&) {
    r.fail("bad count '" + text + "'");
  }
  if (n < 0) r.fail("negative count");
  return static_cast<std::size_t>(n);
}

Magnitude parse_position(LineReader& r, const std::string& text) {
  const std::string_view t = trim(text);
  if (t == "0" || t == "-0") return {};
  if (t.empty() || t.front() != '-') r.fail("position '" + text + "' must be <= 0");
  try {
    return Magnitude::parse(t.substr(1));
  } catch (const ParseError&) {
    r.fail("bad position '" + text + "'");
  }
}

void check_total(LineReader& r, double declared, double actual) {
  if (std::abs(declared - actual) > 1e-9 * std::max(std::abs(actual), 1e-300)) {
    r.fail("declared total mass " + format_double(declared) + " does not match " + format_double(actual));
  }
}

SpectralMeasure read_atomic(LineReader& r, const std::vector<std::string>& header) {
  if (header.size() != 3) r.fail("expected 'atomic <count> <total_mass>'");
  const std::size_t count = parse_count(r, header[1]);
  const Magnitude declared = Magnitude::parse(header[2]);
  std::vector<Atom> atoms;
  atoms.reserve(count);
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < count; ++i) {
    if (!r.next(fields)) r.fail("expected " + std::to_string(count) + " atoms, got " + std::to_string(i));
    if (fields.size() != 2) r.fail("expected '<position> <weight>'");
    const Magnitude distance = parse_position(r, fields[0]);
    Magnitude weight;
    try {
      weight = Magnitude::parse(fields[1]);
    } catch (const ParseError&) {
      r.fail("bad weight '" + fields[1] + "'");
    }
    if (weight.is_zero()) r.fail("atom weight must be > 0");
    atoms.push_back({distance, weight});
  }
  if (r.next(fields)) r.fail("unexpected trailing content");
  AtomicMeasure mu(std::move(atoms));
  const Magnitude ratio = mu.empty() ? Magnitude::from_double(1.0) : declared / mu.total_mass();
  if (!mu.empty() && std::abs(ratio.to_double() - 1.0) > 1e-9) {
    r.fail("declared total mass " + declared.to_string() + " does not match " + mu.total_mass().to_string());
  }
  return mu;
}

DensityMeasure build_family(LineReader& r, const std::vector<std::string>& fields) {
  const std::string& name = fields[1];
  std::vector<double> p;
  for (std::size_t i = 2; i < fields.size(); ++i) p.push_back(parse_double(fields[i]));
  if (name == "power-law" && p.size() == 1) return DensityMeasure::power_law(p[0]);
  if (name == "f-delta" && p.size() == 1) return DensityMeasure::f_delta(p[0]);
  if (name == "uniform" && p.size() == 3) return DensityMeasure::uniform(p[0], p[1], p[2]);
  r.fail("unknown family '" + name + "' with " + std::to_string(p.size()) + " parameters");
}

SpectralMeasure read_density(LineReader& r, const std::vector<std::string>& header) {
  if (header.size() != 5) r.fail("expected 'density <count> <s_lo> <s_hi> <total_mass>'");
  const std::size_t count = parse_count(r, header[1]);
  const double s_lo = parse_double(header[2]);
  const double s_hi = parse_double(header[3]);
  const double declared = parse_double(header[4]);
  std::vector<std::string> fields;
  std::optional<DensityMeasure> mu;
  if (count == 0) {
    if (!r.next(fields) || fields.front() != "family" || fields.size() < 2) {
      r.fail("density record without samples needs a 'family' line");
    }
    mu = build_family(r, fields);
  } else {
    std::vector<double> s;
    std::vector<double> rho;
    for (std::size_t i = 0; i < count; ++i) {
      if (!r.next(fields)) r.fail("expected " + std::to_string(count) + " samples, got " + std::to_string(i));
      if (fields.size() != 2) r.fail("expected '<s> <rho>'");
      s.push_back(parse_double(fields[0]));
      rho.push_back(parse_double(fields[1]));
    }
    mu = DensityMeasure::sampled(std::move(s), std::move(rho));
  }
  if (r.next(fields)) r.fail("unexpected trailing content");
  if (mu->s_lo() != s_lo || mu->s_hi() != s_hi) r.fail("support in header does not match the body");
  check_total(r, declared, mu->total_mass());
  return *mu;
}

}  // namespace

SpectralMeasure read_measure(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> header;
  if (!r.next(header)) r.fail("empty input");
  if (header[0] == "atomic") return read_atomic(r, header);
  if (header[0] == "density") return read_density(r, header);
  r.fail("unknown measure kind '" + header[0] + "'");
}

SpectralMeasure parse_measure(const std::string& text) {
  std::istringstream in(text);
  return read_measure(in);
}

SpectralMeasure load_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open measure file " + path.string());
  return read_measure(in);
}

void write_measure(std::ostream& out, const SpectralMeasure& mu) {
  if (const auto* atomic = std::get_if<AtomicMeasure>(&mu)) {
    out << "atomic " << atomic->size() << ' ' << atomic->total_mass().to_string() << '\n';
    for (const auto& a : atomic->atoms()) {
      out << (a.distance.is_zero() ? std::string("0") : "-" + a.distance.to_string()) << ' '
          << a.weight.to_string() << '\n';
    }
    return;
  }
  const auto& density = std::get<DensityMeasure>(mu);
  const auto& samples = density.samples();
  const std::size_t count = samples ? samples->first.size() : 0;
  if (!samples && !density.family()) {
    throw DomainError("density measure has neither samples nor a named family; it cannot be written");
  }
  out << "density " << count << ' ' << format_double(density.s_lo()) << ' ' << format_double(density.s_hi())
      << ' ' << format_double(density.total_mass()) << '\n';
  if (samples) {
    for (std::size_t i = 0; i < count; ++i) {
      out << format_double(samples->first[i]) << ' ' << format_double(samples->second[i]) << '\n';
    }
  } else {
    out << "family " << density.family()->name;
    for (const double p : density.family()->parameters) out << ' ' << format_double(p);
    out << '\n';
  }
}

std::string format_measure(const SpectralMeasure& mu) {
  std::ostringstream out;
  write_measure(out, mu);
  return out.str();
}

void save_measure(const std::filesystem::path& path, const SpectralMeasure& mu) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot write measure file " + path.string());
  write_measure(out, mu);
}

}  // namespace semistab
