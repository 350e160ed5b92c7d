#include "quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <vector>

namespace semistab::detail {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  // The integrator caches abscissa rows lazily; one instance per thread.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  return integrator.integrate(f, a, b, rel_tol, &error, &l1);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> knots, double rel_tol) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (const double k : knots) {
    if (k > a && k < b) cuts.push_back(k);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(f, cuts[i], cuts[i + 1], rel_tol);
  return total;
}

}  // namespace semistab::detail
