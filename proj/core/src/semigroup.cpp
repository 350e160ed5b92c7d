#include "semistab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "parallel.hpp"
#include "semistab/errors.hpp"
#include "semistab/format.hpp"

namespace semistab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_tolerances(const StabilityTolerances& tol) {
  if (!(tol.gap_tol > 0.0) || !(tol.atom_tol > 0.0)) throw DomainError("classify_stability: tolerances must be > 0");
}

StabilityVerdict verdict_from_gap(Magnitude gap, bool atom_at_zero, const StabilityTolerances& tol) {
  StabilityVerdict v;
  v.gap = gap;
  v.tolerances = tol;
  if (atom_at_zero) {
    v.cls = StabilityClass::kNotStable;
  } else if (gap > Magnitude::from_double(tol.gap_tol)) {
    v.cls = StabilityClass::kExponentiallyStable;
    v.rate = gap.to_double();
  } else {
    v.cls = StabilityClass::kStableNotExponential;
  }
  return v;
}

// Distance from 0 to the top of the support.
Magnitude top_distance(const SpectralMeasure& mu) {
  return std::visit(Overloaded{[](const AtomicMeasure& m) {
                                 if (m.empty()) throw DomainError("empty measure");
                                 return m.atoms().front().distance;
                               },
                               [](const DensityMeasure& m) { return Magnitude::from_double(m.s_lo()); }},
                    mu);
}

double orbit_log_norm(const SpectralMeasure& mu, double t) { return 0.5 * laplace_norm_sq(mu, t, ValueScale::kLog); }

RangeBoundResult bound_scan(const SpectralMeasure& mu_u, double x_norm, double a, const std::vector<double>& t_grid,
                            double bound_scale) {
  RangeBoundResult result;
  result.x_norm = x_norm;
  result.max_violation = -kInf;
  for (const double t : t_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("range bound: grid times must be > 0");
    const double lhs = std::exp(orbit_log_norm(mu_u, t));
    const double rhs = bound_scale * x_norm * std::exp(-t * a) / (std::numbers::e * t);
    const double violation = lhs - rhs;
    if (violation > result.max_violation) {
      result.max_violation = violation;
      result.at_t = t;
    }
  }
  return result;
}

}  // namespace

std::vector<double> geometric_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
    throw DomainError("time grid needs 0 < t_min < t_max, got [" + format_double(t_min) + ", " +
                      format_double(t_max) + "]");
  }
  if (n < 2) throw DomainError("time grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double lo = std::log(t_min);
  const double hi = std::log(t_max);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (n - 1));
  grid.front() = t_min;
  grid.back() = t_max;
  return grid;
}

OrbitTrace evolve_norms(const SpectralMeasure& mu, double t_min, double t_max, int n_t, int jobs, std::string source) {
  OrbitTrace trace;
  trace.times = geometric_grid(t_min, t_max, n_t);
  trace.source = std::move(source);
  trace.log_norm_sq.resize(trace.times.size());
  detail::parallel_for(n_t, jobs, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    trace.log_norm_sq[k] = laplace_norm_sq(mu, trace.times[k], ValueScale::kLog);
  });
  return trace;
}

void write_orbit_csv(std::ostream& out, const OrbitTrace& trace) {
  out << "t,log_norm_sq,ratio\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    const double v = trace.log_norm_sq[i];
    out << format_double(t) << ',' << format_double(v) << ',';
    if (t == 1.0) {
      out << "undefined";
    } else {
      out << format_double(v / std::log(t));
    }
    out << '\n';
  }
}

DecayExponentEstimate decay_exponents(const OrbitTrace& trace, const DecayOptions& options) {
  const std::size_t n = trace.times.size();
  if (n < 2 || trace.log_norm_sq.size() != n) throw DomainError("decay_exponents: degenerate trace");
  if (!(options.tail_fraction > 0.0 && options.tail_fraction <= 1.0)) {
    throw DomainError("decay_exponents: tail_fraction must lie in (0, 1]");
  }
  if (!(trace.times.back() / trace.times.front() >= 100.0)) {
    throw DomainError("decay_exponents: need t_max / t_min >= 100");
  }
  const auto start = static_cast<std::size_t>(std::floor((1.0 - options.tail_fraction) * static_cast<double>(n)));
  if (n - start < 2) throw DomainError("decay_exponents: tail window has fewer than two points");
  if (!(trace.times[start] > 1.0)) throw DomainError("decay_exponents: tail window must lie in t > 1");

  DecayExponentEstimate est;
  est.tail_fraction = options.tail_fraction;
  est.floor = options.floor;
  est.per_time.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = est.per_time[i];
    s.t = trace.times[i];
    s.log_norm_sq = trace.log_norm_sq[i];
    if (s.log_norm_sq == -kInf) {
      s.raw_ratio = ExtendedReal::minus_infinity();
    } else if (s.t != 1.0) {
      s.raw_ratio = ExtendedReal::finite(s.log_norm_sq / std::log(s.t));
    }
  }

  const double anchor_log_t = std::log(trace.times[start]);
  const double anchor_log_n = trace.log_norm_sq[start];
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i = start + 1; i < n; ++i) {
    const double num = trace.log_norm_sq[i] - anchor_log_n;
    const double r = num / (std::log(trace.times[i]) - anchor_log_t);
    const bool below = std::isnan(r) ? true : r < options.floor;
    est.per_time[i].ratio = below ? ExtendedReal::minus_infinity() : ExtendedReal::finite(r);
    const double rv = below ? -kInf : r;
    lo = std::min(lo, rv);
    hi = std::max(hi, rv);
  }
  est.liminf = lo == -kInf ? ExtendedReal::minus_infinity() : ExtendedReal::finite(lo);
  est.limsup = hi == -kInf ? ExtendedReal::minus_infinity() : ExtendedReal::finite(hi);
  return est;
}

std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::kNotStable:
      return "NotStable";
    case StabilityClass::kStableNotExponential:
      return "StableNotExponential";
    case StabilityClass::kExponentiallyStable:
      return "ExponentiallyStable";
  }
  return "unknown";
}

std::string StabilityVerdict::to_record() const {
  std::string out = to_string(cls) + " gap=" + gap.to_string();
  if (rate) out += " rate=" + format_double(*rate);
  out += " gap_tol=" + format_double(tolerances.gap_tol) + " atom_tol=" + format_double(tolerances.atom_tol);
  return out;
}

StabilityVerdict classify_stability(const SpectralMeasure& mu, const StabilityTolerances& tol) {
  check_tolerances(tol);
  if (const auto* atomic = std::get_if<AtomicMeasure>(&mu)) {
    if (atomic->empty()) throw DomainError("classify_stability: empty measure");
    const auto atoms = atomic->atoms();
    std::size_t first = 0;
    bool atom_at_zero = false;
    if (atoms.front().distance.is_zero()) {
      if (atoms.front().weight > Magnitude::from_double(tol.atom_tol)) {
        atom_at_zero = true;
      } else {
        first = 1;  // rounding-level mass at 0 carries no dynamics
      }
    }
    const Magnitude gap = first < atoms.size() ? atoms[first].distance : Magnitude{};
    return verdict_from_gap(gap, atom_at_zero, tol);
  }
  return verdict_from_gap(top_distance(mu), false, tol);
}

StabilityVerdict classify_stability(const DiscretizedOperator& h, const StabilityTolerances& tol) {
  check_tolerances(tol);
  const double gap = std::abs(h.top_eigenvalue());
  return verdict_from_gap(Magnitude::from_double(gap), gap <= tol.atom_tol, tol);
}

bool check_fn_membership(const SpectralMeasure& mu, long long n) {
  if (n < 1) throw DomainError("check_fn_membership: n must be >= 1");
  return top_distance(mu).to_double() >= 1.0 / static_cast<double>(n);
}

bool check_fn_membership(const DiscretizedOperator& h, long long n) {
  if (n < 1) throw DomainError("check_fn_membership: n must be >= 1");
  return h.top_eigenvalue() <= -1.0 / static_cast<double>(n);
}

std::optional<long long> smallest_fn_index(const SpectralMeasure& mu, long long n_max) {
  const double gap = top_distance(mu).to_double();
  if (!(gap > 0.0)) return std::nullopt;
  // Membership is monotone in n; start at ceil(1/gap) and correct rounding.
  const double guess = std::ceil(1.0 / gap);
  if (guess > static_cast<double>(n_max) + 1.0) return std::nullopt;
  auto n = std::max<long long>(1, static_cast<long long>(guess));
  while (n > 1 && check_fn_membership(mu, n - 1)) --n;
  while (n <= n_max && !check_fn_membership(mu, n)) ++n;
  if (n > n_max) return std::nullopt;
  return n;
}

RangeBoundResult range_bound_check(const SpectralMeasure& mu_x, const std::vector<double>& t_grid,
                                   double bound_scale) {
  const double x_norm = std::sqrt(total_mass(mu_x).to_double());
  const SpectralMeasure mu_u =
      std::visit([](const auto& m) -> SpectralMeasure { return m.reweighted_by_square(0.0); }, mu_x);
  return bound_scan(mu_u, x_norm, 0.0, t_grid, bound_scale);
}

RangeBoundResult shifted_range_bound_check(const SpectralMeasure& mu_x, double a, const std::vector<double>& t_grid,
                                           double bound_scale) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("shifted_range_bound_check: a must be >= 0");
  const double x_norm = std::sqrt(total_mass(mu_x).to_double());
  const SpectralMeasure mu_u =
      std::visit([a](const auto& m) -> SpectralMeasure { return m.reweighted_by_square(a); }, mu_x);
  return bound_scan(mu_u, x_norm, a, t_grid, bound_scale);
}

GdeltaProbeResult gdelta_probe(const SpectralMeasure& mu, double alpha_exponent, const SubExponential& beta,
                               double t_min, double t_max, int n_t, int jobs) {
  if (!(alpha_exponent > 0.0)) throw DomainError("gdelta_probe: alpha exponent must be > 0");
  if (!(beta.exp_power > 0.0 && beta.exp_power < 1.0)) {
    throw DomainError("gdelta_probe: beta must be sub-exponential, exp_power in (0, 1)");
  }
  const StabilityVerdict verdict = classify_stability(mu);
  if (verdict.cls != StabilityClass::kStableNotExponential) {
    throw PreconditionError("gdelta_probe: measure is " + to_string(verdict.cls) +
                            ", the probe needs a stable but not exponentially stable one");
  }
  const OrbitTrace trace = evolve_norms(mu, t_min, t_max, n_t, jobs);
  GdeltaProbeResult r;
  r.log_max_alpha_weighted = -kInf;
  r.log_min_beta_weighted = kInf;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    const double log_norm = 0.5 * trace.log_norm_sq[i];
    const double a = alpha_exponent * std::log(t) + log_norm;
    const double b = std::pow(t, beta.exp_power) + beta.poly_power * std::log(t) + log_norm;
    if (a > r.log_max_alpha_weighted) {
      r.log_max_alpha_weighted = a;
      r.t_at_max_alpha = t;
    }
    if (b < r.log_min_beta_weighted) {
      r.log_min_beta_weighted = b;
      r.t_at_min_beta = t;
    }
  }
  return r;
}

}  // namespace semistab
