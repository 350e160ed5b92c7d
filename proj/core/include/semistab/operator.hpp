#pragma once

// Dirichlet finite-difference Schroedinger operators H = Delta_h + diag(V) on
// the box [-L, L]^nu with a cached full eigen-decomposition, their spectral
// measures, and the resolvent at the spectral point i.

#include <cmath>
#include <iosfwd>

#include <Eigen/Core>

#include "semistab/measure.hpp"
#include "semistab/potential.hpp"

namespace semistab {

inline constexpr int kDefaultPointCap = 3600;

struct DecompositionCheck {
  double gram_deviation = 0.0;  // max |V^T V - I|
  double max_residual = 0.0;    // max_j ||H v_j - lambda_j v_j||
  double operator_norm = 0.0;   // max_j |lambda_j|
};

class DiscretizedOperator {
 public:
  [[nodiscard]] const Potential& potential() const { return potential_; }
  [[nodiscard]] int dimension() const { return potential_.dimension(); }
  [[nodiscard]] double half_width() const { return half_width_; }
  [[nodiscard]] double spacing() const { return spacing_; }
  /// Interior points per axis.
  [[nodiscard]] int points_per_axis() const { return points_per_axis_; }
  /// Total grid size N = points_per_axis^nu.
  [[nodiscard]] Eigen::Index size() const { return eigenvalues_.size(); }

  /// Coordinate of interior index i along one axis: -L + (i + 1) h.
  [[nodiscard]] double axis_coordinate(int i) const { return -half_width_ + (i + 1) * spacing_; }

  /// Eigenvalues in descending order (all <= 0) and matching orthonormal
  /// eigenvectors as columns.
  [[nodiscard]] const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  [[nodiscard]] const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  [[nodiscard]] double top_eigenvalue() const { return eigenvalues_(0); }
  [[nodiscard]] double operator_norm() const { return std::abs(eigenvalues_(eigenvalues_.size() - 1)); }

  /// V sampled at the grid points, in grid order (last axis fastest).
  [[nodiscard]] const Eigen::VectorXd& potential_values() const { return potential_values_; }

  /// H u by the stencil, without the decomposition.
  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& u) const;

  [[nodiscard]] DecompositionCheck verify() const;

  [[nodiscard]] bool same_grid(const DiscretizedOperator& other) const;

 private:
  friend DiscretizedOperator discretize(const Potential& v, double half_width, double spacing, int point_cap);
  DiscretizedOperator(Potential potential, double half_width, double spacing, int points_per_axis);

  Potential potential_;
  double half_width_;
  double spacing_;
  int points_per_axis_;
  Eigen::VectorXd potential_values_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// 3-point (nu = 1) or 5-point (nu = 2) Dirichlet stencil. 2L/h must be an
/// integer number of cells, at least 8. Throws ResourceError when the grid
/// has more than point_cap points.
[[nodiscard]] DiscretizedOperator discretize(const Potential& v, double half_width, double spacing,
                                             int point_cap = kDefaultPointCap);

/// Atoms (lambda_j, <v_j, x>^2). Eigenvalues within 1e-12 * ||H|| of each
/// other are merged; weights below (1e-14 ||x||)^2, which are rounding
/// residue of components orthogonal to x, are dropped.
[[nodiscard]] AtomicMeasure spectral_measure(const DiscretizedOperator& h, const Eigen::VectorXd& x);

/// (i I - H)^{-1} u through the eigenbasis.
[[nodiscard]] Eigen::VectorXcd resolvent_apply(const DiscretizedOperator& h, const Eigen::VectorXd& u);

struct ResolventGap {
  double lhs = 0.0;  // ||R_i(H_approx) u - R_i(H) u||
  double rhs = 0.0;  // ||(V_approx - V) R_i(H) u||
  [[nodiscard]] bool holds(double slack = 1e-9) const { return lhs <= rhs + slack; }
};

/// Both operators must live on the same grid (DomainError otherwise).
[[nodiscard]] ResolventGap resolvent_gap(const DiscretizedOperator& h_approx, const DiscretizedOperator& h,
                                         const Eigen::VectorXd& u);

/// "index,eigenvalue" header, then one row per eigenvalue (index from 1).
void write_spectrum_csv(std::ostream& out, const DiscretizedOperator& h);

}  // namespace semistab
