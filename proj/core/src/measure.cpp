#include "semistab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "quadrature.hpp"
#include "semistab/errors.hpp"
#include "semistab/format.hpp"

namespace semistab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp(-745) underflows to zero in double precision.
constexpr double kUnderflowExponent = 745.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double log_sum_exp(std::span<const double> terms) {
  double peak = kNegInf;
  for (const double v : terms) peak = std::max(peak, v);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (const double v : terms) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

// ---------------------------------------------------------------------------
// AtomicMeasure

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (a.weight.is_zero()) throw InvariantViolation("atomic measure: atom weights must be > 0");
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.distance < b.distance; });
  for (const auto& a : atoms) {
    if (!atoms_.empty() && atoms_.back().distance == a.distance) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
    total_ += a.weight;
  }
}

AtomicMeasure AtomicMeasure::from_pairs(std::span<const std::pair<double, double>> pairs) {
  std::vector<Atom> atoms;
  atoms.reserve(pairs.size());
  for (const auto& [position, weight] : pairs) {
    if (!std::isfinite(position) || position > 0.0) {
      throw InvariantViolation("atomic measure: position " + format_double(position) + " is not <= 0");
    }
    if (!std::isfinite(weight) || weight <= 0.0) {
      throw InvariantViolation("atomic measure: weight " + format_double(weight) + " is not > 0");
    }
    atoms.push_back({Magnitude::from_double(-position), Magnitude::from_double(weight)});
  }
  return AtomicMeasure(std::move(atoms));
}

Magnitude AtomicMeasure::mass_below(Magnitude eps) const {
  Magnitude sum;
  for (const auto& a : atoms_) {
    if (!(a.distance < eps)) break;
    sum += a.weight;
  }
  return sum;
}

AtomicMeasure AtomicMeasure::reweighted_by_square(double shift) const {
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw DomainError("reweighted_by_square: shift must be >= 0");
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    Magnitude factor;
    if (shift == 0.0) {
      factor = a.distance * a.distance;
    } else {
      const double gap = a.distance.to_double() - shift;
      if (gap < 0.0) {
        throw DomainError("reweighted_by_square: atom at " + format_double(-a.distance.to_double()) +
                          " lies above -" + format_double(shift));
      }
      factor = Magnitude::from_double(gap * gap);
    }
    const Magnitude w = a.weight * factor;
    if (!w.is_zero()) out.push_back({a.distance, w});
  }
  return AtomicMeasure(std::move(out));
}

// ---------------------------------------------------------------------------
// DensityMeasure

DensityMeasure::DensityMeasure(double s_lo, double s_hi, Density density,
                               std::optional<LogBallMass> log_ball_mass, std::optional<Family> family)
    : DensityMeasure(s_lo, s_hi, std::move(density), std::move(log_ball_mass), std::move(family), {}) {}

DensityMeasure::DensityMeasure(double s_lo, double s_hi, Density density,
                               std::optional<LogBallMass> log_ball_mass, std::optional<Family> family,
                               std::vector<double> knots)
    : s_lo_(s_lo),
      s_hi_(s_hi),
      density_(std::move(density)),
      log_ball_mass_(std::move(log_ball_mass)),
      family_(std::move(family)),
      knots_(std::move(knots)) {
  if (!std::isfinite(s_lo_) || !std::isfinite(s_hi_) || s_lo_ < 0.0 || !(s_hi_ > s_lo_)) {
    throw InvariantViolation("density measure: support must satisfy 0 <= s_lo < s_hi < inf");
  }
  if (!density_) throw InvariantViolation("density measure: missing density function");
  constexpr int kChecks = 256;
  for (int i = 0; i < kChecks; ++i) {
    const double s = s_lo_ + (s_hi_ - s_lo_) * (i + 0.5) / kChecks;
    const double rho = density_(s);
    if (!(rho >= 0.0)) {
      throw InvariantViolation("density measure: density is negative or NaN at s = " + format_double(s));
    }
  }
  total_ = detail::integrate_piecewise(density_, s_lo_, s_hi_, knots_);
  if (!std::isfinite(total_) || !(total_ > 0.0)) {
    throw InvariantViolation("density measure: total mass must be finite and > 0");
  }
  if (log_ball_mass_) {
    // The closed form has to agree with quadrature; fixed seed keeps this reproducible.
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
      const double eps = s_lo_ + (s_hi_ - s_lo_) * (0.02 + 0.98 * unit(rng));
      const double quad = detail::integrate_piecewise(density_, s_lo_, eps, knots_);
      const double closed = std::exp((*log_ball_mass_)(std::log(eps)));
      if (std::abs(quad - closed) > 1e-9 * std::max(quad, 1e-300) + 1e-14) {
        throw InvariantViolation("density measure: closed-form ball mass " + format_double(closed) +
                                 " disagrees with quadrature " + format_double(quad) + " at eps = " +
                                 format_double(eps));
      }
    }
  }
}

DensityMeasure DensityMeasure::power_law(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("power_law: gamma must be > 0");
  return DensityMeasure(
      0.0, 1.0, [gamma](double s) { return gamma * std::pow(s, gamma - 1.0); },
      [gamma](double log_eps) { return gamma * log_eps; }, Family{"power-law", {gamma}});
}

DensityMeasure DensityMeasure::f_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("f_delta: delta must be > 0");
  const double p = 2.0 * delta + 1.0;
  return DensityMeasure(
      0.0, 1.0, [delta](double s) { return std::pow(s, 2.0 * delta); },
      [p](double log_eps) { return p * log_eps - std::log(p); }, Family{"f-delta", {delta}});
}

DensityMeasure DensityMeasure::uniform(double s_lo, double s_hi, double total_mass) {
  if (!(total_mass > 0.0) || !(s_hi > s_lo)) throw DomainError("uniform: need s_hi > s_lo and mass > 0");
  const double rho = total_mass / (s_hi - s_lo);
  return DensityMeasure(
      s_lo, s_hi, [rho](double) { return rho; },
      [s_lo, rho](double log_eps) {
        const double eps = std::exp(log_eps);
        return eps <= s_lo ? kNegInf : std::log(rho * (eps - s_lo));
      },
      Family{"uniform", {s_lo, s_hi, total_mass}});
}

DensityMeasure DensityMeasure::sampled(std::vector<double> s, std::vector<double> rho) {
  if (s.size() != rho.size() || s.size() < 2) {
    throw ParseError("sampled density: need at least two (s, rho) pairs of matching length");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw InvariantViolation("sampled density: s must be strictly increasing");
  }
  for (const double r : rho) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvariantViolation("sampled density: rho must be >= 0");
  }
  std::vector<double> knots(s.begin() + 1, s.end() - 1);
  auto interp = [xs = s, ys = rho](double x) { return interpolate(xs, ys, x); };
  DensityMeasure mu(s.front(), s.back(), interp, std::nullopt, std::nullopt, std::move(knots));
  mu.samples_ = std::make_pair(std::move(s), std::move(rho));
  return mu;
}

double DensityMeasure::density(double s) const {
  if (s < s_lo_ || s > s_hi_) return 0.0;
  return density_(s);
}

double DensityMeasure::log_mass_below(Magnitude eps) const {
  const double e = eps.to_double();
  if (e <= s_lo_) {
    // eps may be far below double range; for s_lo = 0 the closed form still applies.
    if (!(s_lo_ == 0.0 && log_ball_mass_ && !eps.is_zero())) return kNegInf;
  }
  if (e >= s_hi_) return std::log(total_);
  if (log_ball_mass_) return (*log_ball_mass_)(eps.log());
  const double m = detail::integrate_piecewise(density_, s_lo_, e, knots_);
  return m > 0.0 ? std::log(m) : kNegInf;
}

DensityMeasure DensityMeasure::reweighted_by_square(double shift) const {
  if (!(shift >= 0.0) || shift > s_lo_) {
    throw DomainError("reweighted_by_square: support starts at " + format_double(s_lo_) +
                      ", below the shift " + format_double(shift));
  }
  auto rho = density_;
  return DensityMeasure(
      s_lo_, s_hi_, [rho, shift](double s) { return (s - shift) * (s - shift) * rho(s); }, std::nullopt,
      std::nullopt, knots_);
}

// ---------------------------------------------------------------------------
// Free functions

Magnitude total_mass(const SpectralMeasure& mu) {
  return std::visit(Overloaded{[](const AtomicMeasure& m) { return m.total_mass(); },
                               [](const DensityMeasure& m) { return Magnitude::from_double(m.total_mass()); }},
                    mu);
}

Magnitude ball_mass(const SpectralMeasure& mu, Magnitude eps) {
  if (eps.is_zero()) throw DomainError("ball_mass: eps must be > 0");
  return std::visit(Overloaded{[&](const AtomicMeasure& m) { return m.mass_below(eps); },
                               [&](const DensityMeasure& m) { return Magnitude::from_log(m.log_mass_below(eps)); }},
                    mu);
}

double ball_mass(const SpectralMeasure& mu, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("ball_mass: eps must be > 0, got " + format_double(eps));
  return ball_mass(mu, Magnitude::from_double(eps)).to_double();
}

ScalingExponentEstimate scaling_exponents(const SpectralMeasure& mu, Magnitude eps_min, Magnitude eps_max,
                                          int n_scales) {
  if (eps_min.is_zero() || !(eps_min < eps_max) || !(eps_max < Magnitude::from_double(1.0))) {
    throw DomainError("scaling_exponents: need 0 < eps_min < eps_max < 1, got [" + eps_min.to_string() + ", " +
                      eps_max.to_string() + "]");
  }
  if (n_scales < 2) throw DomainError("scaling_exponents: n_scales must be >= 2");

  ScalingExponentEstimate est;
  est.eps_min = eps_min;
  est.eps_max = eps_max;
  est.n_scales = n_scales;
  est.per_scale.resize(static_cast<std::size_t>(n_scales));

  const double log_lo = eps_min.log();
  const double log_hi = eps_max.log();
  bool empty_ball = false;
  for (int j = 0; j < n_scales; ++j) {
    auto& sample = est.per_scale[static_cast<std::size_t>(j)];
    if (j == 0) {
      sample.eps = eps_min;
      sample.log_eps = log_lo;
    } else if (j == n_scales - 1) {
      sample.eps = eps_max;
      sample.log_eps = log_hi;
    } else {
      sample.log_eps = log_lo + (log_hi - log_lo) * j / (n_scales - 1);
      sample.eps = Magnitude::from_log(sample.log_eps);
    }
    sample.log_mass = ball_mass(mu, sample.eps).log();
    if (sample.log_mass == kNegInf) {
      empty_ball = true;
      sample.raw_ratio = ExtendedReal::plus_infinity();
    } else {
      sample.raw_ratio = ExtendedReal::finite(sample.log_mass / sample.log_eps);
    }
  }

  if (empty_ball) {
    // No mass near 0 means both exponents are infinite.
    for (auto& s : est.per_scale) s.ratio = ExtendedReal::plus_infinity();
    est.per_scale.back().ratio.reset();
    est.d_minus = ExtendedReal::plus_infinity();
    est.d_plus = ExtendedReal::plus_infinity();
    return est;
  }

  const auto& anchor = est.per_scale.back();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j + 1 < n_scales; ++j) {
    auto& s = est.per_scale[static_cast<std::size_t>(j)];
    const double r = (s.log_mass - anchor.log_mass) / (s.log_eps - anchor.log_eps);
    s.ratio = ExtendedReal::finite(r);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  est.d_minus = ExtendedReal::finite(lo);
  est.d_plus = ExtendedReal::finite(hi);
  return est;
}

ScalingExponentEstimate scaling_exponents(const SpectralMeasure& mu, double eps_min, double eps_max,
                                          int n_scales) {
  if (!(eps_min > 0.0) || !(eps_max > 0.0) || !std::isfinite(eps_max)) {
    throw DomainError("scaling_exponents: need 0 < eps_min < eps_max < 1");
  }
  return scaling_exponents(mu, Magnitude::from_double(eps_min), Magnitude::from_double(eps_max), n_scales);
}

namespace {

double atomic_log_laplace(const AtomicMeasure& m, double t) {
  if (m.empty()) return kNegInf;
  if (t == 0.0) return m.total_mass().log();
  std::vector<double> terms;
  terms.reserve(m.size());
  for (const auto& a : m.atoms()) {
    terms.push_back(a.weight.log() - 2.0 * t * a.distance.to_double());
  }
  return log_sum_exp(terms);
}

double density_log_laplace(const DensityMeasure& m, double t) {
  if (t == 0.0) return std::log(m.total_mass());
  const double lo = m.s_lo();
  const double width = kUnderflowExponent / (2.0 * t);
  const double hi = std::min(m.s_hi(), lo + width);
  // exp(-2t(s - lo)) * rho(s); the factor exp(-2t lo) is added back in log form.
  const auto& rho = m.density_function();
  const auto integrand = [&rho, lo, t](double s) { return std::exp(-2.0 * t * (s - lo)) * rho(s); };
  std::vector<double> cuts(m.knots());
  for (double step = 1.0 / (2.0 * t); lo + step < hi; step *= 2.0) cuts.push_back(lo + step);
  std::sort(cuts.begin(), cuts.end());
  const double integral = detail::integrate_piecewise(integrand, lo, hi, cuts);
  if (!(integral > 0.0)) return kNegInf;
  return -2.0 * t * lo + std::log(integral);
}

}  // namespace

double laplace_norm_sq(const SpectralMeasure& mu, double t, ValueScale scale) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("laplace_norm_sq: t must be >= 0, got " + format_double(t));
  const double log_value = std::visit(Overloaded{[t](const AtomicMeasure& m) { return atomic_log_laplace(m, t); },
                                                 [t](const DensityMeasure& m) { return density_log_laplace(m, t); }},
                                      mu);
  return scale == ValueScale::kLog ? log_value : std::exp(log_value);
}

AtomicMeasure lacunary_measure(double scale_base, std::span<const double> exponents, int n_atoms) {
  if (exponents.empty()) throw DomainError("lacunary_measure: exponent list is empty");
  if (n_atoms < 1 || static_cast<std::size_t>(n_atoms) != exponents.size()) {
    throw DomainError("lacunary_measure: need exactly n_atoms exponents");
  }
  if (!(scale_base > 0.0 && scale_base < 1.0)) throw DomainError("lacunary_measure: scale_base must lie in (0, 1)");

  std::vector<Atom> atoms;
  atoms.reserve(exponents.size());
  // Repeated squaring keeps b^(2^k) exact for dyadic b.
  Magnitude distance = Magnitude::from_double(scale_base);
  Magnitude total;
  for (const double e : exponents) {
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("lacunary_measure: exponents must be > 0");
    distance = distance * distance;
    const Magnitude weight = distance.pow(e);
    atoms.push_back({distance, weight});
    total += weight;
  }
  for (auto& a : atoms) a.weight = a.weight / total;
  return AtomicMeasure(std::move(atoms));
}

}  // namespace semistab
