#pragma once

// Reference computations that share no code with the library: closed forms,
// long-double sums, Gauss-Kronrod quadrature and dense complex solves.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace semistab::oracle {

/// Dirichlet sine spectrum of the 3-point Laplacian with n interior points
/// and spacing h, descending: -(4/h^2) sin^2(k pi / (2 (n+1))), k = 1..n.
inline std::vector<long double> dirichlet_spectrum(int n, long double h) {
  std::vector<long double> out;
  out.reserve(static_cast<std::size_t>(n));
  const long double pi = std::numbers::pi_v<long double>;
  for (int k = 1; k <= n; ++k) {
    const long double s = std::sin(k * pi / (2.0L * (n + 1)));
    out.push_back(-4.0L / (h * h) * s * s);
  }
  return out;
}

/// Tensor-sum spectrum on an n x n grid, descending.
inline std::vector<long double> dirichlet_spectrum_2d(int n, long double h) {
  const auto axis = dirichlet_spectrum(n, h);
  std::vector<long double> out;
  for (const long double a : axis) {
    for (const long double b : axis) out.push_back(a + b);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// integral_0^eps of rho(s) ds by adaptive Gauss-Kronrod.
inline double integrate(const std::function<double(double)>& rho, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(rho, a, b, 15, 1e-14);
}

/// integral_0^1 gamma s^(gamma-1) e^{-2ts} ds = gamma (2t)^-gamma lower_gamma(gamma, 2t).
inline double power_law_laplace(double gamma, double t) {
  const double x = 2.0 * t;
  return gamma * std::pow(x, -gamma) * boost::math::tgamma_lower(gamma, x);
}

/// integral_0^1 s^(2 delta) e^{-2ts} ds.
inline double f_delta_laplace(double delta, double t) {
  const double a = 2.0 * delta + 1.0;
  const double x = 2.0 * t;
  return std::pow(x, -a) * boost::math::tgamma_lower(a, x);
}

/// sum_k w_k e^{2 t lambda_k} in long double.
inline long double atomic_laplace(const std::vector<std::pair<double, double>>& atoms, double t) {
  long double sum = 0.0L;
  for (const auto& [lambda, w] : atoms) sum += static_cast<long double>(w) * std::exp(2.0L * t * lambda);
  return sum;
}

/// Dense matrix of the Dirichlet 3-point operator plus diag(v).
inline Eigen::MatrixXd dense_operator_1d(const std::vector<double>& v, double h) {
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double c = 1.0 / (h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = -2.0 * c + v[static_cast<std::size_t>(i)];
    if (i > 0) m(i, i - 1) = c;
    if (i + 1 < n) m(i, i + 1) = c;
  }
  return m;
}

/// (iI - H)^{-1} u by a dense complex LU solve.
inline Eigen::VectorXcd dense_resolvent(const Eigen::MatrixXd& h, const Eigen::VectorXd& u) {
  const auto n = h.rows();
  Eigen::MatrixXcd m = -h.cast<std::complex<double>>();
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) += std::complex<double>(0.0, 1.0);
  return m.partialPivLu().solve(u.cast<std::complex<double>>());
}

/// Random atomic measure as (position, weight) pairs: positions
/// -(shift + U(0, span]), weights U(0, 1].
inline std::vector<std::pair<double, double>> random_atoms(std::mt19937_64& rng, int count, double shift,
                                                           double span) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> atoms;
  for (int i = 0; i < count; ++i) {
    const double d = shift + span * (1.0 - unit(rng));
    const double w = 1.0 - unit(rng);
    atoms.emplace_back(-d, w);
  }
  return atoms;
}

inline double relative_error(long double got, long double want) {
  return static_cast<double>(std::fabs(got - want) / std::max(std::fabs(want), 1e-300L));
}

}  // namespace semistab::oracle
