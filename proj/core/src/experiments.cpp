#include "semistab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "parallel.hpp"
#include "semistab/errors.hpp"
#include "semistab/format.hpp"
#include "semistab/measure.hpp"
#include "semistab/measure_io.hpp"
#include "semistab/operator.hpp"
#include "semistab/semigroup.hpp"

namespace semistab {

namespace {

constexpr double kResolventSlack = 1e-9;
constexpr double kConsistencyMetric = 1e-6;

std::string fmt(double v) { return format_double(v); }

Cell cell(const ExtendedReal& x) {
  if (x.is_finite()) return x.value();
  return std::string(x.is_plus_infinity() ? "+inf" : "-inf");
}

// ---------------------------------------------------------------------------
// approximation

struct SequenceRow {
  int index = 0;
  MetricValue metric;
  double lambda_max = 0.0;
  std::vector<ResolventGap> gaps;
};

void approximation_section(StudyReport& report, const std::string& kind, const Potential& v,
                           const DiscretizedOperator& h, const std::vector<Eigen::VectorXd>& probes,
                           const std::vector<int>& indices, const ApproximationParams& params, int jobs) {
  std::vector<SequenceRow> rows(indices.size());
  detail::parallel_for(static_cast<int>(indices.size()), jobs, [&](int i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.index = indices[static_cast<std::size_t>(i)];
    const Potential approx =
        kind == "truncation" ? truncate_potential(v, row.index) : shift_potential(v, row.index, v.a_bound());
    const DiscretizedOperator h_approx = discretize(approx, params.half_width, params.spacing);
    row.metric = metric_d_to_tolerance(approx, v, params.tail_tol);
    row.lambda_max = h_approx.top_eigenvalue();
    for (const auto& u : probes) row.gaps.push_back(resolvent_gap(h_approx, h, u));
  });

  Table& table = report.add_table(kind, {"index", "metric_d", "metric_tail_bound", "lambda_max", "shift_ceiling",
                                         "probe", "lhs", "rhs", "lhs_le_rhs"});
  bool bound_ok = true;
  bool monotone = true;
  bool consistent = true;
  bool ceiling_ok = true;
  std::string consistency_detail = "no index reached metric_d < 1e-06";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const double ceiling = -v.a_bound() / (row.index + 1.0);
    const Cell ceiling_cell = kind == "shift" ? Cell(ceiling) : Cell(std::string("n/a"));
    if (kind == "shift" && !(row.lambda_max <= ceiling)) ceiling_ok = false;
    if (r > 0 && row.metric.value > rows[r - 1].metric.value) monotone = false;
    double worst_lhs = 0.0;
    for (std::size_t p = 0; p < row.gaps.size(); ++p) {
      const auto& g = row.gaps[p];
      bound_ok = bound_ok && g.holds(kResolventSlack);
      worst_lhs = std::max(worst_lhs, g.lhs);
      table.add_row({static_cast<std::int64_t>(row.index), row.metric.value, row.metric.tail_bound, row.lambda_max,
                     ceiling_cell, static_cast<std::int64_t>(p), g.lhs, g.rhs,
                     std::string(g.holds(kResolventSlack) ? "true" : "false")});
    }
    if (row.metric.value < kConsistencyMetric) {
      const bool ok = worst_lhs < 10.0 * params.resolvent_tol;
      consistent = consistent && ok;
      consistency_detail = "index " + std::to_string(row.index) + ": metric_d=" + fmt(row.metric.value) +
                           " max lhs=" + fmt(worst_lhs) + " (limit " + fmt(10.0 * params.resolvent_tol) + ")";
    }
  }

  report.add_check(kind + ".resolvent_bound", bound_ok, "lhs <= rhs + 1e-09 for every index and probe");
  report.add_check(kind + ".metric_monotone", monotone, "metric_d nonincreasing along the sequence");
  report.add_check(kind + ".consistency", consistent, consistency_detail);
  if (kind == "truncation" && !rows.empty()) {
    const auto& last = rows.back();
    report.add_check("truncation.metric_target", last.metric.value < params.metric_target,
                     "metric_d=" + fmt(last.metric.value) + " at k=" + std::to_string(last.index) + " (target " +
                         fmt(params.metric_target) + ")");
  }
  if (kind == "shift") {
    report.add_check("shift.lambda_ceiling", ceiling_ok, "lambda_max <= -a/(l+1) for every l");
  }
}

// ---------------------------------------------------------------------------
// exponent table

struct ExponentRow {
  std::string family;
  double parameter = 0.0;
  double analytic = 0.0;
  ScalingExponentEstimate scale;
  DecayExponentEstimate decay;
};

double abs_error(const ExtendedReal& x, double target) {
  return x.is_finite() ? std::abs(x.value() - target) : std::numeric_limits<double>::infinity();
}

double sum_error(const ExtendedReal& a, const ExtendedReal& b) {
  return a.is_finite() && b.is_finite() ? std::abs(a.value() + b.value()) : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// section 3 bounds

AtomicMeasure random_atomic(std::mt19937_64& rng, int atoms, double offset, double span) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(static_cast<std::size_t>(atoms));
  for (int i = 0; i < atoms; ++i) {
    // 1 - U lies in (0, 1]: no atom sits at 0 and no weight vanishes.
    const double position = offset == 0.0 ? -span * (1.0 - unit(rng)) : -(offset + span * unit(rng));
    const double weight = 1.0 - unit(rng);
    pairs.emplace_back(position, weight);
  }
  return AtomicMeasure::from_pairs(pairs);
}

}  // namespace

std::vector<Eigen::VectorXd> probe_vectors(Eigen::Index size, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> component(-1.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  for (int p = 0; p < count; ++p) {
    Eigen::VectorXd u(size);
    for (Eigen::Index i = 0; i < size; ++i) u(i) = component(rng);
    out.push_back(u / u.norm());
  }
  return out;
}

StudyReport approximation_study(const Potential& v, const ApproximationParams& params, std::uint64_t seed,
                                int jobs) {
  StudyReport report;
  report.study = "approximation";
  const DiscretizedOperator h = discretize(v, params.half_width, params.spacing);
  const auto probes = probe_vectors(h.size(), params.probes, seed);
  if (params.truncation) {
    approximation_section(report, "truncation", v, h, probes, params.truncation_indices, params, jobs);
  }
  if (params.shift) approximation_section(report, "shift", v, h, probes, params.shift_indices, params, jobs);
  report.notes.push_back("limit potential " + v.describe() + ", top eigenvalue " + fmt(h.top_eigenvalue()));
  return report;
}

StudyReport gap_vs_box(const Potential& v, const GapVsBoxParams& params, int jobs) {
  if (!v.support_radius()) {
    throw DomainError("gap_vs_box: " + v.describe() + " does not vanish outside a bounded set");
  }
  if (params.half_widths.empty()) throw DomainError("gap_vs_box: L list is empty");
  std::vector<double> widths = params.half_widths;
  std::sort(widths.begin(), widths.end());
  std::vector<std::optional<DiscretizedOperator>> ops(widths.size());
  detail::parallel_for(static_cast<int>(widths.size()), jobs, [&](int i) {
    ops[static_cast<std::size_t>(i)].emplace(discretize(v, widths[static_cast<std::size_t>(i)], params.spacing));
  });

  StudyReport report;
  report.study = "gap-vs-box";
  Table& table = report.add_table("gap_vs_box", {"L", "points_per_axis", "lambda_max", "gap", "free_lambda_max",
                                                 "free_gap_plus_a"});
  const bool is_free = v.support_radius() == 0.0;
  bool monotone = true;
  bool bracketed = true;
  double free_error = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = *ops[i];
    // Top of the discrete Dirichlet Laplacian: -(4/h^2) sin^2(pi h / (4L)) per axis.
    const double s = std::sin(std::numbers::pi * params.spacing / (4.0 * widths[i]));
    const double free_top = -op.dimension() * 4.0 / (params.spacing * params.spacing) * s * s;
    const double gap = std::abs(op.top_eigenvalue());
    const double slack = 1e-12 * op.operator_norm();
    if (i > 0 && gap > std::abs(ops[i - 1]->top_eigenvalue()) + 1e-12) monotone = false;
    if (gap < std::abs(free_top) - slack || gap > std::abs(free_top) + v.a_bound() + slack) bracketed = false;
    free_error = std::max(free_error, std::abs(gap - std::abs(free_top)) / std::abs(free_top));
    table.add_row({widths[i], static_cast<std::int64_t>(op.points_per_axis()), op.top_eigenvalue(), gap, free_top,
                   std::abs(free_top) + v.a_bound()});
  }
  table.add_row({std::string("inf"), std::string("extrapolated"), std::string("extrapolated"),
                 std::string("extrapolated"), std::string("extrapolated"), std::string("extrapolated")});
  report.add_check("gap_monotone", monotone, "|lambda_max| nonincreasing in L (slack 1e-12)");
  report.add_check("free_bracket", bracketed, "|lambda_0| <= |lambda_max| <= |lambda_0| + a");
  if (is_free) {
    report.add_check("free_closed_form", free_error <= 1e-9, "max relative error " + fmt(free_error));
  }
  report.notes.push_back("the L = inf row is a placeholder; no continuum limit is computed");
  return report;
}

StudyReport exponent_table(const ExponentTableParams& params, int jobs) {
  for (const double d : params.deltas) {
    if (!(d > 0.5 && d < 1.0)) throw DomainError("exponent_table: delta " + fmt(d) + " lies outside (1/2, 1)");
  }
  for (const double g : params.gammas) {
    if (!(g > 0.0)) throw DomainError("exponent_table: gamma " + fmt(g) + " must be > 0");
  }
  std::vector<ExponentRow> rows;
  for (const double d : params.deltas) rows.push_back({"f-delta", d, 2.0 * d + 1.0, {}, {}});
  for (const double g : params.gammas) rows.push_back({"power-law", g, g, {}, {}});

  detail::parallel_for(static_cast<int>(rows.size()), jobs, [&](int i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    const SpectralMeasure mu = row.family == "f-delta" ? DensityMeasure::f_delta(row.parameter)
                                                       : DensityMeasure::power_law(row.parameter);
    row.scale = scaling_exponents(mu, params.eps_min, params.eps_max, params.n_scales);
    const OrbitTrace trace = evolve_norms(mu, params.t_min, params.t_max, params.n_t);
    row.decay = decay_exponents(trace, DecayOptions{params.tail_fraction});
  });

  StudyReport report;
  report.study = "exponent-table";
  Table& table = report.add_table(
      "exponent_table", {"family", "parameter", "analytic", "d_minus", "d_plus", "decay_liminf", "decay_limsup",
                         "scale_error", "decay_error", "roundtrip_error", "pass"});
  for (const auto& row : rows) {
    const double scale_err =
        std::max(abs_error(row.scale.d_minus, row.analytic), abs_error(row.scale.d_plus, row.analytic));
    const double decay_err =
        std::max(abs_error(row.decay.liminf, -row.analytic), abs_error(row.decay.limsup, -row.analytic));
    const double roundtrip =
        std::max(sum_error(row.decay.limsup, row.scale.d_minus), sum_error(row.decay.liminf, row.scale.d_plus));
    const bool pass = scale_err <= params.scale_tol && decay_err <= params.decay_tol && roundtrip <= params.decay_tol;
    table.add_row({row.family, row.parameter, row.analytic, cell(row.scale.d_minus), cell(row.scale.d_plus),
                   cell(row.decay.liminf), cell(row.decay.limsup), scale_err, decay_err, roundtrip,
                   std::string(pass ? "true" : "false")});
    report.add_check(row.family + "(" + fmt(row.parameter) + ")", pass,
                     "analytic " + fmt(row.analytic) + ", scale error " + fmt(scale_err) + ", decay error " +
                         fmt(decay_err) + ", round trip " + fmt(roundtrip));
  }
  if (params.deltas.empty()) report.notes.push_back("delta list empty; power-law rows only");
  return report;
}

StudyReport gdelta_witness(const GdeltaWitnessParams& params, int jobs) {
  if (!(params.t_max >= 100.0) || !(params.t_min > 0.0) || !(params.t_max / params.t_min >= 100.0)) {
    throw DomainError("gdelta_witness: horizon [" + fmt(params.t_min) + ", " + fmt(params.t_max) +
                      "] is too short; need t_max >= 100 and t_max / t_min >= 100");
  }
  if (params.exponents.empty()) throw DomainError("gdelta_witness: exponent list is empty");
  if (params.n_atoms < 1) throw DomainError("gdelta_witness: n_atoms must be >= 1");
  std::vector<double> exponents;
  for (int i = 0; i < params.n_atoms; ++i) {
    exponents.push_back(params.exponents[static_cast<std::size_t>(i) % params.exponents.size()]);
  }
  const SpectralMeasure mu = lacunary_measure(params.base, exponents, params.n_atoms);
  const StabilityVerdict verdict = classify_stability(mu);
  const ScalingExponentEstimate scale = scaling_exponents(mu, params.eps_min, params.eps_max, params.n_scales);
  const GdeltaProbeResult probe =
      gdelta_probe(mu, params.alpha, SubExponential{params.beta_exp_power, params.beta_poly_power}, params.t_min,
                   params.t_max, params.n_t, jobs);

  StudyReport report;
  report.study = "gdelta-witness";
  report.artifacts.push_back({"witness_measure.txt", format_measure(mu)});

  Table& scales = report.add_table("witness_scales", {"eps", "log_eps", "log_mass", "raw_ratio", "ratio"});
  for (const auto& s : scale.per_scale) {
    scales.add_row({s.eps.to_string(), s.log_eps, s.log_mass, cell(s.raw_ratio),
                    s.ratio ? cell(*s.ratio) : Cell(std::string("anchor"))});
  }
  Table& summary = report.add_table("witness_summary", {"n_atoms", "d_minus", "d_plus", "class", "gap"});
  summary.add_row({static_cast<std::int64_t>(params.n_atoms), cell(scale.d_minus), cell(scale.d_plus),
                   to_string(verdict.cls), verdict.gap.to_string()});
  Table& probe_table = report.add_table(
      "witness_probe", {"alpha", "beta_exp_power", "beta_poly_power", "t_min", "t_max", "n_t",
                        "log_max_alpha_weighted", "t_at_max_alpha", "log_min_beta_weighted", "t_at_min_beta"});
  probe_table.add_row({params.alpha, params.beta_exp_power, params.beta_poly_power, params.t_min, params.t_max,
                       static_cast<std::int64_t>(params.n_t), probe.log_max_alpha_weighted, probe.t_at_max_alpha,
                       probe.log_min_beta_weighted, probe.t_at_min_beta});

  report.add_check("class", verdict.cls == StabilityClass::kStableNotExponential, verdict.to_record());
  const bool alpha_large = probe.log_max_alpha_weighted >= params.log_threshold;
  if (params.expect == "oscillation") {
    report.add_check("d_minus", scale.d_minus <= ExtendedReal::finite(params.d_minus_max),
                     "d_minus=" + scale.d_minus.to_string() + " (need <= " + fmt(params.d_minus_max) + ")");
    report.add_check("d_plus", scale.d_plus >= ExtendedReal::finite(params.d_plus_min),
                     "d_plus=" + scale.d_plus.to_string() + " (need >= " + fmt(params.d_plus_min) + ")");
    report.add_check("alpha_weighted", alpha_large,
                     "ln max alpha(t)||e^{tA}x|| = " + fmt(probe.log_max_alpha_weighted) + " (need >= " +
                         fmt(params.log_threshold) + ")");
    report.add_check("beta_weighted", probe.log_min_beta_weighted <= -params.log_threshold,
                     "ln min beta(t)||e^{tA}x|| = " + fmt(probe.log_min_beta_weighted) + " (need <= " +
                         fmt(-params.log_threshold) + ")");
  } else {
    report.add_check("alpha_bounded", !alpha_large,
                     "ln max alpha(t)||e^{tA}x|| = " + fmt(probe.log_max_alpha_weighted) + " (need < " +
                         fmt(params.log_threshold) + ")");
  }
  if (!alpha_large) report.notes.push_back("no oscillation witness at this horizon");
  return report;
}

StudyReport section3_bounds(const Section3Params& params, std::uint64_t seed, int jobs, double bound_scale) {
  const std::vector<double> grid = geometric_grid(params.t_min, params.t_max, params.n_t);
  std::mt19937_64 rng(seed);
  std::vector<AtomicMeasure> plain;
  for (int i = 0; i < params.measures; ++i) plain.push_back(random_atomic(rng, params.atoms, 0.0, params.max_distance));
  struct Shifted {
    double a;
    AtomicMeasure mu;
  };
  std::vector<Shifted> shifted;
  for (const double a : params.shifts) {
    for (int i = 0; i < params.shifted_measures; ++i) {
      shifted.push_back({a, random_atomic(rng, params.atoms, a, params.max_distance)});
    }
  }

  std::vector<RangeBoundResult> plain_results(plain.size());
  detail::parallel_for(static_cast<int>(plain.size()), jobs, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    plain_results[k] = range_bound_check(plain[k], grid, bound_scale);
  });
  std::vector<RangeBoundResult> shifted_results(shifted.size());
  detail::parallel_for(static_cast<int>(shifted.size()), jobs, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    shifted_results[k] = shifted_range_bound_check(shifted[k].mu, shifted[k].a, grid, bound_scale);
  });

  StudyReport report;
  report.study = "section3-bounds";
  Table& range = report.add_table("range_bound", {"measure", "x_norm", "max_violation", "at_t", "holds"});
  int range_failures = 0;
  for (std::size_t i = 0; i < plain_results.size(); ++i) {
    const auto& r = plain_results[i];
    range_failures += r.holds() ? 0 : 1;
    range.add_row({static_cast<std::int64_t>(i), r.x_norm, r.max_violation, r.at_t,
                   std::string(r.holds() ? "true" : "false")});
  }
  report.add_check("range_bound", range_failures == 0,
                   std::to_string(range_failures) + " of " + std::to_string(plain_results.size()) +
                       " measures violate ||e^{tA}Ax|| <= ||x||/(e t) beyond 1e-12 ||x||");

  Table& shift = report.add_table("shifted_bound", {"a", "measure", "x_norm", "max_violation", "at_t", "holds"});
  int shift_failures = 0;
  for (std::size_t i = 0; i < shifted_results.size(); ++i) {
    const auto& r = shifted_results[i];
    shift_failures += r.holds() ? 0 : 1;
    shift.add_row({shifted[i].a, static_cast<std::int64_t>(i % static_cast<std::size_t>(std::max(1, params.shifted_measures))),
                   r.x_norm, r.max_violation, r.at_t, std::string(r.holds() ? "true" : "false")});
  }
  report.add_check("shifted_bound", shift_failures == 0,
                   std::to_string(shift_failures) + " of " + std::to_string(shifted_results.size()) +
                       " measures violate ||e^{tA}(A+a)x|| <= ||x|| e^{-ta}/(e t) beyond 1e-12 ||x||");

  // Single atom at -lambda0: the bound is attained at t = 1/lambda0.
  Table& equality = report.add_table("equality_witness", {"lambda0", "t", "orbit_norm", "bound", "difference"});
  double worst = 0.0;
  for (const double lambda0 : {0.5, 1.0, 2.0, 10.0}) {
    const AtomicMeasure mu = AtomicMeasure::from_pairs({{-lambda0, 1.0}});
    const double t = 1.0 / lambda0;
    const RangeBoundResult r = range_bound_check(mu, {t}, bound_scale);
    const double bound = bound_scale / (std::numbers::e * t);
    worst = std::max(worst, std::abs(r.max_violation));
    equality.add_row({lambda0, t, bound + r.max_violation, bound, r.max_violation});
  }
  report.add_check("equality_witness", worst <= 1e-12, "max |orbit - bound| at t = 1/lambda0 is " + fmt(worst));
  return report;
}

StudyReport run_study(const StudyConfig& config, const RunOptions& options) {
  const int jobs = options.jobs > 0 ? options.jobs : config.jobs;
  const auto need_potential = [&] {
    if (config.potential.empty()) {
      throw ParseError("study config: study kind " + to_string(config.kind) + " needs a [potential] section");
    }
    return potential_from_fields(config.potential);
  };
  StudyReport report;
  switch (config.kind) {
    case StudyKind::kApproximation:
      report = approximation_study(need_potential(), config.approximation, config.seed, jobs);
      break;
    case StudyKind::kGapVsBox:
      report = gap_vs_box(need_potential(), config.gap_vs_box, jobs);
      break;
    case StudyKind::kExponentTable:
      report = exponent_table(config.exponent_table, jobs);
      break;
    case StudyKind::kGdeltaWitness:
      report = gdelta_witness(config.gdelta_witness, jobs);
      break;
    case StudyKind::kSection3Bounds:
      report = section3_bounds(config.section3, config.seed, jobs, options.bound_scale);
      break;
  }
  report.config_echo = config.source_text;
  return report;
}

}  // namespace semistab
