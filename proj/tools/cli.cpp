#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "semistab/errors.hpp"
#include "semistab/experiments.hpp"
#include "semistab/format.hpp"
#include "semistab/measure.hpp"
#include "semistab/measure_io.hpp"
#include "semistab/operator.hpp"
#include "semistab/potential.hpp"
#include "semistab/semigroup.hpp"
#include "semistab/study_config.hpp"
#include "semistab/version.hpp"

namespace semistab::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string extended(const ExtendedReal& x) { return x.to_string(); }

std::pair<Magnitude, Magnitude> parse_window(const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 2) throw UsageError("--window expects two values 'a,b'");
  return {Magnitude::parse(parts[0]), Magnitude::parse(parts[1])};
}

// Writes to the file when a path is given, otherwise to out.
template <class F>
void emit(const std::string& path, std::ostream& out, F write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ResourceError("cannot write " + path);
  write(file);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral-measure and semigroup-stability laboratory", "semistab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // measure
  auto* measure = app.add_subcommand("measure", "Operations on a measure file");
  measure->require_subcommand(1);
  std::string measure_file;
  std::string window = "1e-6,0.1";
  int scales = 64;
  bool per_scale = false;
  auto* exponents = measure->add_subcommand("exponents", "Scaling exponents d-, d+ at 0");
  exponents->add_option("file", measure_file, "Measure file")->required();
  exponents->add_option("--window", window, "Scale window 'eps_min,eps_max' (values may use <m>p<exp2>)")
      ->capture_default_str();
  exponents->add_option("--scales", scales, "Number of geometric scales")->capture_default_str();
  exponents->add_flag("--per-scale", per_scale, "Print the per-scale ratio table instead");

  double t_min = 1.0;
  double t_max = 1e4;
  int n_t = 200;
  double tail = 0.8;
  int jobs = 1;
  auto* decay = measure->add_subcommand("decay", "Decay exponents of the orbit generated by the measure");
  decay->add_option("file", measure_file, "Measure file")->required();
  decay->add_option("--tmin", t_min, "First time")->capture_default_str();
  decay->add_option("--tmax", t_max, "Last time")->capture_default_str();
  decay->add_option("--nt", n_t, "Number of geometric time points")->capture_default_str();
  decay->add_option("--tail", tail, "Fraction of the grid used")->capture_default_str();

  double eps = 0.0;
  auto* ball = measure->add_subcommand("ball-mass", "mu(B(0, eps))");
  ball->add_option("file", measure_file, "Measure file")->required();
  ball->add_option("--eps", eps, "Radius")->required();

  // evolve
  std::string out_path;
  auto* evolve = app.add_subcommand("evolve", "Orbit norms ln ||e^{tA}x||^2 as CSV");
  evolve->add_option("file", measure_file, "Measure file")->required();
  evolve->add_option("--tmin", t_min, "First time")->capture_default_str();
  evolve->add_option("--tmax", t_max, "Last time")->capture_default_str();
  evolve->add_option("--nt", n_t, "Number of geometric time points")->capture_default_str();
  evolve->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  evolve->add_option("--out", out_path, "Output file (default stdout)");

  // classify
  StabilityTolerances tol;
  auto* classify = app.add_subcommand("classify", "Stability verdict for a measure");
  classify->add_option("file", measure_file, "Measure file")->required();
  classify->add_option("--gap-tol", tol.gap_tol, "Gap tolerance")->capture_default_str();
  classify->add_option("--atom-tol", tol.atom_tol, "Weight tolerance for an atom at 0")->capture_default_str();

  // study
  std::string config_path;
  std::string out_dir;
  int study_jobs = 0;
  auto* study = app.add_subcommand("study", "Run a study config; exit 1 if any check fails");
  study->add_option("config", config_path, "Study config file")->required();
  study->add_option("--jobs", study_jobs, "Worker threads (default: from the config)");
  study->add_option("--out", out_dir, "Output directory (default: config, then $SEMISTAB_OUTPUT_DIR)");
#ifdef SEMISTAB_FALSIFY_HOOKS
  double bound_scale = 1.0;
  study->add_option("--inject-bound-scale", bound_scale, "Multiply the section3 bounds (test hook)");
#endif

  // operator
  auto* op = app.add_subcommand("operator", "Discretized Schroedinger operators");
  op->require_subcommand(1);
  std::string potential_file;
  double half_width = 10.0;
  double spacing = 0.1;
  int cap = kDefaultPointCap;
  auto* spectrum = op->add_subcommand("spectrum", "Eigenvalues of Delta_h + V as CSV");
  spectrum->set_help_flag("--help", "Print this help message and exit");  // frees -h for the spacing
  spectrum->add_option("potential", potential_file, "Potential descriptor file")->required();
  spectrum->add_option("--L", half_width, "Box half-width")->capture_default_str();
  spectrum->add_option("--h", spacing, "Grid spacing")->capture_default_str();
  spectrum->add_option("--cap", cap, "Maximum grid size")->capture_default_str();
  spectrum->add_option("--out", out_path, "Output file (default stdout)");

  std::vector<const char*> argv{"semistab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*exponents) {
      const auto [lo, hi] = parse_window(window);
      const auto est = scaling_exponents(load_measure(measure_file), lo, hi, scales);
      if (per_scale) {
        out << "eps,log_mass,raw_ratio,ratio\n";
        for (const auto& s : est.per_scale) {
          out << s.eps.to_string() << ',' << format_double(s.log_mass) << ',' << extended(s.raw_ratio) << ','
              << (s.ratio ? extended(*s.ratio) : std::string("anchor")) << '\n';
        }
      } else {
        out << "d_minus,d_plus,eps_min,eps_max,n_scales\n"
            << extended(est.d_minus) << ',' << extended(est.d_plus) << ',' << lo.to_string() << ','
            << hi.to_string() << ',' << scales << '\n';
      }
    } else if (*decay) {
      const auto trace = evolve_norms(load_measure(measure_file), t_min, t_max, n_t);
      const auto est = decay_exponents(trace, DecayOptions{tail});
      out << "liminf,limsup,t_min,t_max,n_t,tail_fraction\n"
          << extended(est.liminf) << ',' << extended(est.limsup) << ',' << format_double(t_min) << ','
          << format_double(t_max) << ',' << n_t << ',' << format_double(tail) << '\n';
    } else if (*ball) {
      out << "eps,mass\n" << format_double(eps) << ',' << format_double(ball_mass(load_measure(measure_file), eps))
          << '\n';
    } else if (*evolve) {
      const auto trace = evolve_norms(load_measure(measure_file), t_min, t_max, n_t, jobs, measure_file);
      emit(out_path, out, [&](std::ostream& s) { write_orbit_csv(s, trace); });
    } else if (*classify) {
      out << classify_stability(load_measure(measure_file), tol).to_record() << '\n';
    } else if (*study) {
      const StudyConfig config = load_study_config(config_path);
      RunOptions options;
      options.jobs = study_jobs;
#ifdef SEMISTAB_FALSIFY_HOOKS
      options.bound_scale = bound_scale;
#endif
      const StudyReport report = run_study(config, options);
      const auto dir = resolve_output_dir(config, out_dir);
      report.write(dir);
      out << report.summary();
      err << "wrote " << dir.string() << '\n';
      return report.all_passed() ? kExitOk : kExitContractViolation;
    } else if (*spectrum) {
      const auto h = discretize(load_potential(potential_file), half_width, spacing, cap);
      emit(out_path, out, [&](std::ostream& s) { write_spectrum_csv(s, h); });
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    // Bad files, configs, domains and resource caps are all input errors.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace semistab::cli
