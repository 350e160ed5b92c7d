#include "semistab/study_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "semistab/errors.hpp"
#include "semistab/format.hpp"

namespace semistab {

namespace {

namespace pt = boost::property_tree;

// Typed access to one INI section that remembers which keys were consumed.
class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  template <class F>
  auto wrap(const std::string& key, F f) {
    try {
      return f();
    } catch (const ParseError& e) {
      fail(key, std::string("is malformed: ") + e.what());
    }
  }

  bool present() const { return tree_ != nullptr; }

  std::optional<std::string> raw(const std::string& key) {
    if (!tree_) return std::nullopt;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    used_.insert(key);
    return std::string(trim(it->second.data()));
  }

  void read(const std::string& key, double& out) {
    if (auto v = raw(key)) out = wrap(key, [&] { return parse_double(*v); });
  }
  void read(const std::string& key, int& out) {
    if (auto v = raw(key)) out = static_cast<int>(wrap(key, [&] { return parse_integer(*v); }));
  }
  void read(const std::string& key, std::uint64_t& out) {
    if (auto v = raw(key)) {
      const long long n = wrap(key, [&] { return parse_integer(*v); });
      if (n < 0) fail(key, "must be >= 0");
      out = static_cast<std::uint64_t>(n);
    }
  }
  void read(const std::string& key, std::string& out) {
    if (auto v = raw(key)) out = *v;
  }
  void read(const std::string& key, std::vector<double>& out) {
    if (auto v = raw(key)) out = wrap(key, [&] { return parse_double_list(*v); });
  }
  void read(const std::string& key, std::vector<int>& out) {
    if (auto v = raw(key)) out = wrap(key, [&] { return parse_index_list(*v); });
  }
  void read(const std::string& key, Magnitude& out) {
    if (auto v = raw(key)) out = wrap(key, [&] { return Magnitude::parse(*v); });
  }

  void reject_unknown() const {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_) {
      if (!used_.contains(key)) throw ParseError("study config: unknown key '" + key + "' in [" + name_ + "]");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ParseError("study config: [" + name_ + "] " + key + " " + what);
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> used_;
};

const pt::ptree* child(const pt::ptree& root, const std::string& name) {
  const auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("study config: " + what + " must be > 0");
}

void validate(const StudyConfig& c) {
  if (c.jobs < 1) throw DomainError("study config: jobs must be >= 1");
  const auto& a = c.approximation;
  require_positive(a.half_width, "approximation.L");
  require_positive(a.spacing, "approximation.h");
  require_positive(a.tail_tol, "approximation.tail_tol");
  require_positive(a.metric_target, "approximation.metric_target");
  require_positive(a.resolvent_tol, "approximation.resolvent_tol");
  if (a.probes < 1) throw DomainError("study config: approximation.probes must be >= 1");
  require_positive(c.gap_vs_box.spacing, "gap_vs_box.h");
  const auto& e = c.exponent_table;
  require_positive(e.scale_tol, "exponent_table.scale_tol");
  require_positive(e.decay_tol, "exponent_table.decay_tol");
  const auto& g = c.gdelta_witness;
  require_positive(g.alpha, "gdelta_witness.alpha");
  require_positive(g.log_threshold, "gdelta_witness.log_threshold");
  if (g.expect != "oscillation" && g.expect != "none") {
    throw ParseError("study config: gdelta_witness.expect must be 'oscillation' or 'none'");
  }
  const auto& s = c.section3;
  if (s.measures < 0 || s.shifted_measures < 0 || s.atoms < 1) {
    throw DomainError("study config: section3 counts must be nonnegative and atoms >= 1");
  }
  require_positive(s.max_distance, "section3.max_distance");
  for (const double a_shift : s.shifts) require_positive(a_shift, "section3.shifts entries");
}

}  // namespace

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::kApproximation:
      return "approximation";
    case StudyKind::kGapVsBox:
      return "gap-vs-box";
    case StudyKind::kExponentTable:
      return "exponent-table";
    case StudyKind::kGdeltaWitness:
      return "gdelta-witness";
    case StudyKind::kSection3Bounds:
      return "section3-bounds";
  }
  return "unknown";
}

StudyKind parse_study_kind(const std::string& text) {
  for (const auto k : {StudyKind::kApproximation, StudyKind::kGapVsBox, StudyKind::kExponentTable,
                       StudyKind::kGdeltaWitness, StudyKind::kSection3Bounds}) {
    if (to_string(k) == text) return k;
  }
  throw ParseError("study config: unknown study kind '" + text +
                   "' (expected approximation, gap-vs-box, exponent-table, gdelta-witness or section3-bounds)");
}

StudyConfig parse_study_config(const std::string& text) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(std::string("study config: ") + e.what());
  }
  static const std::set<std::string> kSections{"study",          "potential",      "approximation", "gap_vs_box",
                                               "exponent_table", "gdelta_witness", "section3"};
  for (const auto& [name, tree] : root) {
    if (!kSections.contains(name) || !tree.data().empty()) {
      throw ParseError("study config: unknown section or top-level key '" + name + "'");
    }
  }

  StudyConfig c;
  c.source_text = text;

  Section study("study", child(root, "study"));
  if (!study.present()) throw ParseError("study config: missing [study] section");
  const auto kind = study.raw("kind");
  if (!kind) throw ParseError("study config: [study] kind is required");
  c.kind = parse_study_kind(*kind);
  study.read("seed", c.seed);
  study.read("jobs", c.jobs);
  if (const auto out = study.raw("output")) c.output = *out;
  study.reject_unknown();

  if (const auto* pot = child(root, "potential")) {
    for (const auto& [key, value] : *pot) c.potential[key] = std::string(trim(value.data()));
  }

  Section ap("approximation", child(root, "approximation"));
  auto& a = c.approximation;
  if (const auto seqs = ap.raw("sequences")) {
    a.truncation = a.shift = false;
    for (const auto& s : split_list(*seqs)) {
      if (s == "truncation") {
        a.truncation = true;
      } else if (s == "shift") {
        a.shift = true;
      } else {
        ap.fail("sequences", "has unknown entry '" + s + "'");
      }
    }
  }
  ap.read("truncation_indices", a.truncation_indices);
  ap.read("shift_indices", a.shift_indices);
  ap.read("L", a.half_width);
  ap.read("h", a.spacing);
  ap.read("probes", a.probes);
  ap.read("tail_tol", a.tail_tol);
  ap.read("metric_target", a.metric_target);
  ap.read("resolvent_tol", a.resolvent_tol);
  ap.reject_unknown();

  Section gb("gap_vs_box", child(root, "gap_vs_box"));
  gb.read("L_list", c.gap_vs_box.half_widths);
  gb.read("h", c.gap_vs_box.spacing);
  gb.reject_unknown();

  Section et("exponent_table", child(root, "exponent_table"));
  auto& e = c.exponent_table;
  et.read("delta_list", e.deltas);
  et.read("gamma_list", e.gammas);
  et.read("eps_min", e.eps_min);
  et.read("eps_max", e.eps_max);
  et.read("n_scales", e.n_scales);
  et.read("t_min", e.t_min);
  et.read("t_max", e.t_max);
  et.read("n_t", e.n_t);
  et.read("tail_fraction", e.tail_fraction);
  et.read("scale_tol", e.scale_tol);
  et.read("decay_tol", e.decay_tol);
  et.reject_unknown();

  Section gw("gdelta_witness", child(root, "gdelta_witness"));
  auto& g = c.gdelta_witness;
  gw.read("base", g.base);
  gw.read("exponents", g.exponents);
  gw.read("n_atoms", g.n_atoms);
  gw.read("eps_min", g.eps_min);
  gw.read("eps_max", g.eps_max);
  gw.read("n_scales", g.n_scales);
  gw.read("alpha", g.alpha);
  gw.read("beta_exp_power", g.beta_exp_power);
  gw.read("beta_poly_power", g.beta_poly_power);
  gw.read("t_min", g.t_min);
  gw.read("t_max", g.t_max);
  gw.read("n_t", g.n_t);
  gw.read("expect", g.expect);
  gw.read("d_minus_max", g.d_minus_max);
  gw.read("d_plus_min", g.d_plus_min);
  gw.read("log_threshold", g.log_threshold);
  gw.reject_unknown();

  Section s3("section3", child(root, "section3"));
  auto& s = c.section3;
  s3.read("measures", s.measures);
  s3.read("atoms", s.atoms);
  s3.read("max_distance", s.max_distance);
  s3.read("t_min", s.t_min);
  s3.read("t_max", s.t_max);
  s3.read("n_t", s.n_t);
  s3.read("shifted_measures", s.shifted_measures);
  s3.read("shifts", s.shifts);
  s3.reject_unknown();

  validate(c);
  return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open study config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_study_config(text.str());
}

std::filesystem::path resolve_output_dir(const StudyConfig& config, const std::filesystem::path& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!config.output.empty()) return config.output;
  if (const char* env = std::getenv("SEMISTAB_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / to_string(config.kind);
  }
  return std::filesystem::path("semistab-out") / to_string(config.kind);
}

}  // namespace semistab
