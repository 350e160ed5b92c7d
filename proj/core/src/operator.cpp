#include "semistab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "semistab/errors.hpp"
#include "semistab/format.hpp"

namespace semistab {

DiscretizedOperator::DiscretizedOperator(Potential potential, double half_width, double spacing,
                                         int points_per_axis)
    : potential_(std::move(potential)),
      half_width_(half_width),
      spacing_(spacing),
      points_per_axis_(points_per_axis) {
  const int n = points_per_axis_;
  const double inv_h2 = 1.0 / (spacing_ * spacing_);
  if (dimension() == 1) {
    potential_values_.resize(n);
    for (int i = 0; i < n; ++i) potential_values_(i) = potential_.at(axis_coordinate(i));
    Eigen::VectorXd diag = potential_values_.array() - 2.0 * inv_h2;
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, inv_h2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw ResourceError("tridiagonal eigensolver did not converge");
    eigenvalues_ = solver.eigenvalues().reverse();
    eigenvectors_ = solver.eigenvectors().rowwise().reverse();
  } else {
    const Eigen::Index size = static_cast<Eigen::Index>(n) * n;
    potential_values_.resize(size);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Eigen::Index p = static_cast<Eigen::Index>(i) * n + j;
        potential_values_(p) = potential_.at(axis_coordinate(i), axis_coordinate(j));
        h(p, p) = potential_values_(p) - 4.0 * inv_h2;
        if (i + 1 < n) h(p, p + n) = h(p + n, p) = inv_h2;
        if (j + 1 < n) h(p, p + 1) = h(p + 1, p) = inv_h2;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw ResourceError("dense eigensolver did not converge");
    eigenvalues_ = solver.eigenvalues().reverse();
    eigenvectors_ = solver.eigenvectors().rowwise().reverse();
  }
}

Eigen::VectorXd DiscretizedOperator::apply(const Eigen::VectorXd& u) const {
  if (u.size() != size()) throw DomainError("apply: vector size does not match the grid");
  const int n = points_per_axis_;
  const double inv_h2 = 1.0 / (spacing_ * spacing_);
  Eigen::VectorXd out = potential_values_.cwiseProduct(u);
  if (dimension() == 1) {
    for (int i = 0; i < n; ++i) {
      double lap = -2.0 * u(i);
      if (i > 0) lap += u(i - 1);
      if (i + 1 < n) lap += u(i + 1);
      out(i) += inv_h2 * lap;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Eigen::Index p = static_cast<Eigen::Index>(i) * n + j;
        double lap = -4.0 * u(p);
        if (i > 0) lap += u(p - n);
        if (i + 1 < n) lap += u(p + n);
        if (j > 0) lap += u(p - 1);
        if (j + 1 < n) lap += u(p + 1);
        out(p) += inv_h2 * lap;
      }
    }
  }
  return out;
}

DecompositionCheck DiscretizedOperator::verify() const {
  DecompositionCheck check;
  check.operator_norm = operator_norm();
  const Eigen::MatrixXd gram = eigenvectors_.transpose() * eigenvectors_;
  check.gram_deviation = (gram - Eigen::MatrixXd::Identity(size(), size())).cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < size(); ++j) {
    const Eigen::VectorXd v = eigenvectors_.col(j);
    check.max_residual = std::max(check.max_residual, (apply(v) - eigenvalues_(j) * v).norm());
  }
  return check;
}

bool DiscretizedOperator::same_grid(const DiscretizedOperator& other) const {
  return dimension() == other.dimension() && points_per_axis_ == other.points_per_axis_ &&
         half_width_ == other.half_width_ && spacing_ == other.spacing_;
}

DiscretizedOperator discretize(const Potential& v, double half_width, double spacing, int point_cap) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("discretize: L must be > 0");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw DomainError("discretize: h must be > 0");
  const double cells_exact = 2.0 * half_width / spacing;
  const double cells = std::round(cells_exact);
  if (std::abs(cells - cells_exact) > 1e-9 * cells_exact) {
    throw DomainError("discretize: h = " + format_double(spacing) + " does not divide 2L = " +
                      format_double(2.0 * half_width) + " into whole cells");
  }
  if (cells < 8) throw DomainError("discretize: need at least 8 cells, got " + format_double(cells));
  const double per_axis = cells - 1.0;
  const double total = v.dimension() == 1 ? per_axis : per_axis * per_axis;
  if (total > point_cap) {
    throw ResourceError("discretize: grid has " + format_double(total) + " points, above the cap of " +
                        std::to_string(point_cap));
  }
  return DiscretizedOperator(v, half_width, spacing, static_cast<int>(per_axis));
}

AtomicMeasure spectral_measure(const DiscretizedOperator& h, const Eigen::VectorXd& x) {
  if (x.size() != h.size()) {
    throw DomainError("spectral_measure: vector has " + std::to_string(x.size()) + " entries, grid has " +
                      std::to_string(h.size()));
  }
  const double x_norm_sq = x.squaredNorm();
  if (!(x_norm_sq > 0.0)) throw DomainError("spectral_measure: x must be nonzero");
  const Eigen::VectorXd coeffs = h.eigenvectors().transpose() * x;
  const double drop_below = 1e-28 * x_norm_sq;
  const double merge_tol = 1e-12 * h.operator_norm();

  std::vector<Atom> atoms;
  double group_lambda = 0.0;
  double group_weight = 0.0;
  bool open = false;
  const auto flush = [&] {
    if (open && group_weight > drop_below) {
      atoms.push_back({Magnitude::from_double(std::max(0.0, -group_lambda)), Magnitude::from_double(group_weight)});
    }
  };
  for (Eigen::Index j = 0; j < h.size(); ++j) {
    const double lambda = h.eigenvalues()(j);
    const double w = coeffs(j) * coeffs(j);
    if (open && std::abs(lambda - group_lambda) <= merge_tol) {
      group_weight += w;
      continue;
    }
    flush();
    group_lambda = lambda;
    group_weight = w;
    open = true;
  }
  flush();
  return AtomicMeasure(std::move(atoms));
}

Eigen::VectorXcd resolvent_apply(const DiscretizedOperator& h, const Eigen::VectorXd& u) {
  if (u.size() != h.size()) throw DomainError("resolvent_apply: vector size does not match the grid");
  const Eigen::VectorXd coeffs = h.eigenvectors().transpose() * u;
  Eigen::VectorXcd scaled(coeffs.size());
  const std::complex<double> i_unit(0.0, 1.0);
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) scaled(j) = coeffs(j) / (i_unit - h.eigenvalues()(j));
  return h.eigenvectors().cast<std::complex<double>>() * scaled;
}

ResolventGap resolvent_gap(const DiscretizedOperator& h_approx, const DiscretizedOperator& h,
                           const Eigen::VectorXd& u) {
  if (!h_approx.same_grid(h)) throw DomainError("resolvent_gap: operators live on different grids");
  const Eigen::VectorXcd r = resolvent_apply(h, u);
  const Eigen::VectorXcd r_approx = resolvent_apply(h_approx, u);
  const Eigen::VectorXd dv = h_approx.potential_values() - h.potential_values();
  ResolventGap gap;
  gap.lhs = (r_approx - r).norm();
  gap.rhs = (dv.cast<std::complex<double>>().cwiseProduct(r)).norm();
  return gap;
}

void write_spectrum_csv(std::ostream& out, const DiscretizedOperator& h) {
  out << "index,eigenvalue\n";
  for (Eigen::Index j = 0; j < h.size(); ++j) out << (j + 1) << ',' << format_double(h.eigenvalues()(j)) << '\n';
}

}  // namespace semistab
