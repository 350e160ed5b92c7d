#pragma once

#include <functional>
#include <span>

namespace semistab::detail {

inline constexpr double kQuadratureRelTol = 1e-12;

// Tanh-sinh quadrature over [a, b]; integrable endpoint singularities are
// fine. Returns 0 when b <= a.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = kQuadratureRelTol);

// Same, additionally splitting [a, b] at every knot strictly inside it.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> knots, double rel_tol = kQuadratureRelTol);

}  // namespace semistab::detail
