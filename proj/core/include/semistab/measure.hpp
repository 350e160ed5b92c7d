#pragma once

// Finite positive Borel measures on (-inf, 0]: ball masses at 0, pointwise
// scaling exponents, and the Laplace transform that gives squared orbit
// norms of the semigroup generated by a negative self-adjoint operator.

#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semistab/extended_real.hpp"
#include "semistab/magnitude.hpp"

namespace semistab {

/// Point mass at position -distance.
struct Atom {
  Magnitude distance;
  Magnitude weight;

  [[nodiscard]] double position() const { return -distance.to_double(); }
};

/// Finitely many atoms, kept sorted closest-to-zero first with coincident
/// positions merged. Every weight is strictly positive.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  /// (position <= 0, weight > 0) pairs.
  static AtomicMeasure from_pairs(std::span<const std::pair<double, double>> pairs);
  static AtomicMeasure from_pairs(std::initializer_list<std::pair<double, double>> pairs) {
    return from_pairs(std::span<const std::pair<double, double>>(pairs.begin(), pairs.size()));
  }

  [[nodiscard]] std::span<const Atom> atoms() const { return atoms_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] bool empty() const { return atoms_.empty(); }
  [[nodiscard]] Magnitude total_mass() const { return total_; }

  /// Sum of weights of atoms with distance < eps.
  [[nodiscard]] Magnitude mass_below(Magnitude eps) const;

  /// Reweights every atom by w -> w * (|lambda| - shift)^2, dropping atoms
  /// that end up with zero weight. Requires shift <= |lambda| for every atom.
  [[nodiscard]] AtomicMeasure reweighted_by_square(double shift) const;

 private:
  std::vector<Atom> atoms_;
  Magnitude total_;
};

/// Absolutely continuous measure in the distance coordinate s = |lambda|,
/// supported on [s_lo, s_hi]. An optional closed form for ln mu(B(0, eps))
/// as a function of ln eps replaces quadrature for ball masses.
class DensityMeasure {
 public:
  using Density = std::function<double(double)>;
  using LogBallMass = std::function<double(double)>;

  /// Named closed-form family, kept so the text format can reproduce it.
  struct Family {
    std::string name;
    std::vector<double> parameters;
  };

  DensityMeasure(double s_lo, double s_hi, Density density,
                 std::optional<LogBallMass> log_ball_mass = std::nullopt,
                 std::optional<Family> family = std::nullopt);

  /// density gamma * s^(gamma-1) on [0, 1]; ball mass eps^gamma.
  static DensityMeasure power_law(double gamma);
  /// |f_delta(s)|^2 = s^(2 delta) on [0, 1]; ball mass eps^(2 delta + 1) / (2 delta + 1).
  static DensityMeasure f_delta(double delta);
  /// Constant density with the given total mass on [s_lo, s_hi].
  static DensityMeasure uniform(double s_lo, double s_hi, double total_mass = 1.0);
  /// Piecewise-linear interpolation through (s_i, rho_i), s strictly increasing.
  static DensityMeasure sampled(std::vector<double> s, std::vector<double> rho);

  [[nodiscard]] double s_lo() const { return s_lo_; }
  [[nodiscard]] double s_hi() const { return s_hi_; }
  [[nodiscard]] double density(double s) const;
  [[nodiscard]] const Density& density_function() const { return density_; }
  [[nodiscard]] double total_mass() const { return total_; }
  [[nodiscard]] bool has_closed_form() const { return log_ball_mass_.has_value(); }
  [[nodiscard]] const std::optional<Family>& family() const { return family_; }
  [[nodiscard]] const std::optional<std::pair<std::vector<double>, std::vector<double>>>& samples() const {
    return samples_;
  }

  /// ln mu(B(0, eps)); -inf when the ball misses the support.
  [[nodiscard]] double log_mass_below(Magnitude eps) const;

  /// New density measure with density (s - shift)^2 * rho(s); the closed form
  /// is not carried over.
  [[nodiscard]] DensityMeasure reweighted_by_square(double shift) const;

  /// Interior points where the density is not smooth; quadrature splits there.
  [[nodiscard]] const std::vector<double>& knots() const { return knots_; }

 private:
  DensityMeasure(double s_lo, double s_hi, Density density, std::optional<LogBallMass> log_ball_mass,
                 std::optional<Family> family, std::vector<double> knots);

  double s_lo_;
  double s_hi_;
  Density density_;
  std::optional<LogBallMass> log_ball_mass_;
  std::optional<Family> family_;
  std::optional<std::pair<std::vector<double>, std::vector<double>>> samples_;
  std::vector<double> knots_;
  double total_ = 0.0;
};

using SpectralMeasure = std::variant<AtomicMeasure, DensityMeasure>;

[[nodiscard]] Magnitude total_mass(const SpectralMeasure& mu);

/// mu({lambda : |lambda| < eps}). Throws DomainError unless eps > 0.
[[nodiscard]] Magnitude ball_mass(const SpectralMeasure& mu, Magnitude eps);
[[nodiscard]] double ball_mass(const SpectralMeasure& mu, double eps);

struct ScaleSample {
  Magnitude eps;
  double log_eps = 0.0;
  double log_mass = 0.0;        // -inf when the ball is empty
  ExtendedReal raw_ratio;       // ln mu(B(0,eps)) / ln eps
  std::optional<ExtendedReal> ratio;  // anchored ratio; empty at the anchor scale
};

/// Finite-window estimate of d^-(0) and d^+(0).
///
/// Scales form a geometric grid from eps_min to eps_max (both hit exactly).
/// The per-scale ratio is taken with its logarithmic origin at the coarsest
/// scale, (ln mu(B_eps) - ln mu(B_eps_max)) / (ln eps - ln eps_max). It has
/// the same eps -> 0 liminf/limsup as ln mu(B_eps) / ln eps but no
/// ln(C)/ln(eps) bias for measures with ball mass C * eps^gamma. d_minus and
/// d_plus are the min and max of the anchored ratios. If any ball in the
/// window has zero mass both exponents are +inf.
struct ScalingExponentEstimate {
  ExtendedReal d_minus;
  ExtendedReal d_plus;
  Magnitude eps_min;
  Magnitude eps_max;
  int n_scales = 0;
  std::vector<ScaleSample> per_scale;  // ascending eps; anchor is the last entry
};

[[nodiscard]] ScalingExponentEstimate scaling_exponents(const SpectralMeasure& mu, Magnitude eps_min,
                                                        Magnitude eps_max, int n_scales);
[[nodiscard]] ScalingExponentEstimate scaling_exponents(const SpectralMeasure& mu, double eps_min,
                                                        double eps_max, int n_scales);

enum class ValueScale { kLinear, kLog };

/// integral of exp(2 t lambda) d mu(lambda) = ||e^{tA} x||^2, or its natural
/// log. Atomic measures use log-sum-exp; densities use tanh-sinh quadrature
/// on dyadic pieces, truncated where 2 t (s - s_lo) exceeds 745.
[[nodiscard]] double laplace_norm_sq(const SpectralMeasure& mu, double t,
                                     ValueScale scale = ValueScale::kLinear);

/// Atoms at -b^(2^k), k = 1..n_atoms, with weights |lambda_k|^e_k
/// normalized to total mass 1.
[[nodiscard]] AtomicMeasure lacunary_measure(double scale_base, std::span<const double> exponents,
                                             int n_atoms);

}  // namespace semistab
