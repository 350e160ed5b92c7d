#pragma once

// Contraction semigroups e^{tA} in the spectral representation: orbit norms,
// polynomial decay exponents, stability classification by the spectral gap,
// membership in the sets {sup_t e^{t/n} ||e^{tA}|| <= 1}, the decay bounds for
// vectors in the range of A, and the weighted-orbit probe for measures that
// are stable but not exponentially stable.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semistab/extended_real.hpp"
#include "semistab/magnitude.hpp"
#include "semistab/measure.hpp"
#include "semistab/operator.hpp"

namespace semistab {

/// n points from t_min to t_max, geometrically spaced, endpoints exact.
[[nodiscard]] std::vector<double> geometric_grid(double t_min, double t_max, int n);

struct OrbitTrace {
  std::vector<double> times;
  std::vector<double> log_norm_sq;  // ln ||e^{tA} x||^2
  std::string source;
};

/// Laplace transform of mu on the geometric grid, evaluated in the log domain.
/// With jobs > 1 the grid is split into contiguous chunks evaluated on
/// separate threads; every value is computed independently, so the result is
/// identical for any job count.
[[nodiscard]] OrbitTrace evolve_norms(const SpectralMeasure& mu, double t_min, double t_max, int n_t, int jobs = 1,
                                      std::string source = {});

/// Columns t, log_norm_sq, ratio (= log_norm_sq / ln t; "undefined" at t = 1).
void write_orbit_csv(std::ostream& out, const OrbitTrace& trace);

struct TimeSample {
  double t = 0.0;
  double log_norm_sq = 0.0;
  ExtendedReal raw_ratio;             // ln ||e^{tA}x||^2 / ln t
  std::optional<ExtendedReal> ratio;  // anchored ratio; empty outside the tail and at the anchor
};

struct DecayOptions {
  double tail_fraction = 0.8;
  /// Ratios below the floor are reported as -inf.
  double floor = -50.0;
};

/// Finite-horizon estimate of liminf/limsup of ln ||e^{tA}x||^2 / ln t.
///
/// Uses the last tail_fraction of the grid. As for scaling exponents the
/// per-time ratio has its logarithmic origin at the first tail time t_a,
/// (ln N(t) - ln N(t_a)) / (ln t - ln t_a), which removes the ln(C)/ln(t) bias
/// of orbits N(t) ~ C t^-gamma without changing the t -> inf limits.
struct DecayExponentEstimate {
  ExtendedReal liminf;
  ExtendedReal limsup;
  double tail_fraction = 0.8;
  double floor = -50.0;
  std::vector<TimeSample> per_time;
};

/// Requires t_max / t_min >= 100, at least two tail points, and tail times > 1.
[[nodiscard]] DecayExponentEstimate decay_exponents(const OrbitTrace& trace, const DecayOptions& options = {});

enum class StabilityClass { kNotStable, kStableNotExponential, kExponentiallyStable };

[[nodiscard]] std::string to_string(StabilityClass c);

struct StabilityTolerances {
  double gap_tol = 1e-8;
  double atom_tol = 1e-12;
};

struct StabilityVerdict {
  StabilityClass cls = StabilityClass::kNotStable;
  Magnitude gap;               // distance from 0 to the top of the support / spectrum
  std::optional<double> rate;  // present iff exponentially stable
  StabilityTolerances tolerances;

  /// e.g. "ExponentiallyStable gap=1 rate=1 gap_tol=1e-08 atom_tol=1e-12".
  [[nodiscard]] std::string to_record() const;
};

/// Atomic: NotStable when an atom at 0 has weight > atom_tol (lighter atoms at
/// 0 are ignored); otherwise ExponentiallyStable iff the closest atom is
/// farther than gap_tol. Density: gap = s_lo. Operator: gap = |lambda_max|,
/// and NotStable when |lambda_max| <= atom_tol. Throws DomainError for an
/// empty measure or nonpositive tolerances.
[[nodiscard]] StabilityVerdict classify_stability(const SpectralMeasure& mu, const StabilityTolerances& tol = {});
[[nodiscard]] StabilityVerdict classify_stability(const DiscretizedOperator& h, const StabilityTolerances& tol = {});

/// ||e^{tA}|| = e^{t lambda_top} for these models, so the semigroup lies in
/// F_n iff lambda_top <= -1/n.
[[nodiscard]] bool check_fn_membership(const SpectralMeasure& mu, long long n);
[[nodiscard]] bool check_fn_membership(const DiscretizedOperator& h, long long n);

/// Smallest n <= n_max with membership in F_n, if any.
[[nodiscard]] std::optional<long long> smallest_fn_index(const SpectralMeasure& mu, long long n_max);

struct RangeBoundResult {
  double max_violation = 0.0;  // max_t ||e^{tA}u|| - bound(t)
  double at_t = 0.0;
  double x_norm = 0.0;
  /// max_violation <= 1e-12 ||x||.
  [[nodiscard]] bool holds() const { return max_violation <= 1e-12 * x_norm; }
};

/// u = Ax, d mu_u = lambda^2 d mu_x; bound(t) = bound_scale * ||x|| / (e t).
/// bound_scale < 1 tightens the bound; it exists to show the checker can fail.
[[nodiscard]] RangeBoundResult range_bound_check(const SpectralMeasure& mu_x, const std::vector<double>& t_grid,
                                                 double bound_scale = 1.0);

/// u = (A + a) x, d mu_u = (lambda + a)^2 d mu_x; bound(t) =
/// bound_scale * ||x|| e^{-ta} / (e t). The support of mu_x must lie in
/// (-inf, -a] (DomainError otherwise).
[[nodiscard]] RangeBoundResult shifted_range_bound_check(const SpectralMeasure& mu_x, double a,
                                                         const std::vector<double>& t_grid,
                                                         double bound_scale = 1.0);

/// beta(t) = t^poly_power * exp(t^exp_power), exp_power in (0, 1).
struct SubExponential {
  double exp_power = 0.5;
  double poly_power = 0.0;
};

struct GdeltaProbeResult {
  double log_max_alpha_weighted = 0.0;  // ln max_t alpha(t) ||e^{tA}x||
  double t_at_max_alpha = 0.0;
  double log_min_beta_weighted = 0.0;   // ln min_t beta(t) ||e^{tA}x||
  double t_at_min_beta = 0.0;
};

/// alpha(t) = t^alpha_exponent. Throws PreconditionError unless mu is
/// StableNotExponential under default tolerances.
[[nodiscard]] GdeltaProbeResult gdelta_probe(const SpectralMeasure& mu, double alpha_exponent,
                                             const SubExponential& beta, double t_min, double t_max, int n_t,
                                             int jobs = 1);

}  // namespace semistab
