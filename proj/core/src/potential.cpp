#include "semistab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "semistab/errors.hpp"
#include "semistab/format.hpp"

namespace semistab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr int kInvariantSamples = 10000;
constexpr double kInvariantBox = 100.0;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (const double c : x) s += c * c;
  return std::sqrt(s);
}

// Linear weight and lower index along one axis, or nullopt outside the hull.
std::optional<std::pair<int, double>> locate(const Potential::Sampled& s, double x) {
  const double pos = (x - s.origin) / s.spacing;
  if (!(pos >= 0.0) || pos > s.points - 1) return std::nullopt;
  const int i = std::min(static_cast<int>(std::floor(pos)), s.points - 2);
  return std::make_pair(i, pos - i);
}

double eval_sampled(const Potential::Sampled& s, std::span<const double> x) {
  const auto ax = locate(s, x[0]);
  if (!ax) return 0.0;
  const auto [i, wx] = *ax;
  if (x.size() == 1) return (1.0 - wx) * s.values[i] + wx * s.values[i + 1];
  const auto ay = locate(s, x[1]);
  if (!ay) return 0.0;
  const auto [j, wy] = *ay;
  const auto at = [&](int a, int b) { return s.values[static_cast<std::size_t>(a) * s.points + b]; };
  return (1.0 - wx) * ((1.0 - wy) * at(i, j) + wy * at(i, j + 1)) +
         wx * ((1.0 - wy) * at(i + 1, j) + wy * at(i + 1, j + 1));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation("potential: " + what);
}

void validate_parameters(const Potential::Form& form, int dimension) {
  std::visit(Overloaded{
                 [](const Potential::Constant& c) { require(std::isfinite(c.value), "constant value must be finite"); },
                 [](const Potential::GaussianWell& g) {
                   require(std::isfinite(g.depth) && g.width > 0.0 && std::isfinite(g.width),
                           "gaussian-well needs finite depth and width > 0");
                 },
                 [](const Potential::ExponentialWell& e) {
                   require(std::isfinite(e.depth) && e.scale > 0.0 && std::isfinite(e.scale),
                           "exponential-well needs finite depth and scale > 0");
                 },
                 [](const Potential::SquareWell& s) {
                   require(std::isfinite(s.depth) && s.radius > 0.0 && std::isfinite(s.radius),
                           "square-well needs finite depth and radius > 0");
                 },
                 [dimension](const Potential::Sampled& s) {
                   require(s.points >= 2 && s.spacing > 0.0 && std::isfinite(s.spacing) && std::isfinite(s.origin),
                           "sampled grid needs points >= 2 and spacing > 0");
                   std::size_t expected = static_cast<std::size_t>(s.points);
                   if (dimension == 2) expected *= static_cast<std::size_t>(s.points);
                   require(s.values.size() == expected, "sampled grid expects " + std::to_string(expected) +
                                                             " values, got " + std::to_string(s.values.size()));
                 },
                 [dimension](const Potential::Truncated& t) {
                   require(t.base && t.base->dimension() == dimension, "truncation base has the wrong dimension");
                   require(t.k > 0.0, "truncation radius must be > 0");
                 },
                 [dimension](const Potential::Shifted& s) {
                   require(s.base && s.base->dimension() == dimension, "shift base has the wrong dimension");
                   require(s.l >= 1, "shift index must be >= 1");
                 },
             },
             form);
}

}  // namespace

Potential::Potential(double a_bound, int dimension, Form form)
    : a_bound_(a_bound), dimension_(dimension), form_(std::make_shared<const Form>(std::move(form))) {
  require(a_bound_ > 0.0 && std::isfinite(a_bound_), "a_bound must be finite and > 0");
  require(dimension_ == 1 || dimension_ == 2, "dimension must be 1 or 2");
  validate_parameters(*form_, dimension_);

  // Tiny slack so that the affine shift map, exact in real arithmetic,
  // survives rounding.
  const double floor_value = -a_bound_ * (1.0 + 1e-12);
  const auto check = [&](double v, const std::string& where) {
    if (!(v <= 0.0) || v < floor_value) {
      throw InvariantViolation("potential value " + format_double(v) + " at " + where + " violates -" +
                               format_double(a_bound_) + " <= V <= 0");
    }
  };
  if (const auto* s = std::get_if<Sampled>(form_.get())) {
    for (std::size_t i = 0; i < s->values.size(); ++i) check(s->values[i], "sample " + std::to_string(i));
    return;
  }
  std::mt19937_64 rng(0xC0FFEE);
  std::uniform_real_distribution<double> coord(-kInvariantBox, kInvariantBox);
  std::array<double, 2> x{};
  // The origin is always checked: every closed form attains its extreme there.
  check((*this)(std::span<const double>(x.data(), static_cast<std::size_t>(dimension_))), "the origin");
  for (int i = 0; i < kInvariantSamples; ++i) {
    for (int d = 0; d < dimension_; ++d) x[static_cast<std::size_t>(d)] = coord(rng);
    const std::span<const double> pt(x.data(), static_cast<std::size_t>(dimension_));
    const double v = (*this)(pt);
    if (!(v <= 0.0) || v < floor_value) {
      std::ostringstream where;
      where << "x = (" << format_double(x[0]);
      if (dimension_ == 2) where << ", " << format_double(x[1]);
      where << ")";
      check(v, where.str());
    }
  }
}

double Potential::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension_) {
    throw DomainError("potential of dimension " + std::to_string(dimension_) + " evaluated at a point with " +
                      std::to_string(x.size()) + " coordinates");
  }
  return std::visit(Overloaded{
                        [](const Constant& c) { return c.value; },
                        [&](const GaussianWell& g) {
                          const double r = norm(x) / g.width;
                          return -g.depth * std::exp(-r * r);
                        },
                        [&](const ExponentialWell& e) { return -e.depth * std::exp(-norm(x) / e.scale); },
                        [&](const SquareWell& s) { return norm(x) <= s.radius ? -s.depth : 0.0; },
                        [&](const Sampled& s) { return eval_sampled(s, x); },
                        [&](const Truncated& t) { return norm(x) < t.k ? (*t.base)(x) : 0.0; },
                        [&](const Shifted& s) {
                          const double l = s.l;
                          return (l / (l + 1.0)) * (*s.base)(x) - s.base->a_bound() / (l + 1.0);
                        },
                    },
                    *form_);
}

double Potential::at(double x) const {
  const std::array<double, 1> p{x};
  return (*this)(p);
}

double Potential::at(double x, double y) const {
  const std::array<double, 2> p{x, y};
  return (*this)(p);
}

std::optional<double> Potential::support_radius() const {
  return std::visit(Overloaded{
                        [](const Constant& c) -> std::optional<double> {
                          if (c.value == 0.0) return 0.0;
                          return std::nullopt;
                        },
                        [](const GaussianWell& g) -> std::optional<double> {
                          if (g.depth == 0.0) return 0.0;
                          return std::nullopt;
                        },
                        [](const ExponentialWell& e) -> std::optional<double> {
                          if (e.depth == 0.0) return 0.0;
                          return std::nullopt;
                        },
                        [](const SquareWell& s) -> std::optional<double> { return s.radius; },
                        [this](const Sampled& s) -> std::optional<double> {
                          const double far = std::max(std::abs(s.origin), std::abs(s.origin + s.spacing * (s.points - 1)));
                          return dimension_ == 2 ? far * std::sqrt(2.0) : far;
                        },
                        [](const Truncated& t) -> std::optional<double> {
                          const auto inner = t.base->support_radius();
                          return inner ? std::min(*inner, t.k) : t.k;
                        },
                        [](const Shifted&) -> std::optional<double> { return std::nullopt; },
                    },
                    *form_);
}

std::string Potential::describe() const {
  const auto f = [](double v) { return format_double(v); };
  return std::visit(Overloaded{
                        [&](const Constant& c) { return "constant(value=" + f(c.value) + ")"; },
                        [&](const GaussianWell& g) {
                          return "gaussian-well(depth=" + f(g.depth) + ",width=" + f(g.width) + ")";
                        },
                        [&](const ExponentialWell& e) {
                          return "exponential-well(depth=" + f(e.depth) + ",scale=" + f(e.scale) + ")";
                        },
                        [&](const SquareWell& s) {
                          return "square-well(depth=" + f(s.depth) + ",radius=" + f(s.radius) + ")";
                        },
                        [&](const Sampled& s) {
                          return "sampled(origin=" + f(s.origin) + ",spacing=" + f(s.spacing) +
                                 ",points=" + std::to_string(s.points) + ")";
                        },
                        [&](const Truncated& t) { return "truncate(" + t.base->describe() + ",k=" + f(t.k) + ")"; },
                        [&](const Shifted& s) {
                          return "shift(" + s.base->describe() + ",l=" + std::to_string(s.l) + ")";
                        },
                    },
                    *form_);
}

Potential truncate_potential(const Potential& v, int k) {
  if (k < 1) throw DomainError("truncate_potential: k must be >= 1, got " + std::to_string(k));
  return Potential(v.a_bound(), v.dimension(),
                   Potential::Truncated{std::make_shared<const Potential>(v), static_cast<double>(k)});
}

Potential shift_potential(const Potential& v, int l, double a) {
  if (l < 1) throw DomainError("shift_potential: l must be >= 1, got " + std::to_string(l));
  if (a != v.a_bound()) {
    throw DomainError("shift_potential: a = " + format_double(a) + " differs from the bound " +
                      format_double(v.a_bound()) + " of the potential");
  }
  return Potential(v.a_bound(), v.dimension(), Potential::Shifted{std::make_shared<const Potential>(v), l});
}

MetricValue metric_d(const Potential& v, const Potential& u, int max_index, const MetricOptions& options) {
  if (v.dimension() != u.dimension()) throw DomainError("metric_d: potentials have different dimensions");
  if (v.a_bound() != u.a_bound()) throw DomainError("metric_d: potentials have different bounds a");
  if (max_index < 0) throw DomainError("metric_d: J must be >= 0");
  if (!(options.h_sup_slope >= 0.0) || !(options.h_sup_offset > 0.0)) {
    throw DomainError("metric_d: sampling spacing must be positive");
  }

  MetricValue out;
  out.terms = max_index;
  out.tail_bound = std::ldexp(1.0, -max_index);
  for (int j = 0; j <= max_index; ++j) {
    const double cap = std::ldexp(1.0, -j);
    double sup = 0.0;
    if (j == 0) {
      const std::array<double, 2> origin{};
      sup = std::abs(v(std::span(origin.data(), static_cast<std::size_t>(v.dimension()))) -
                     u(std::span(origin.data(), static_cast<std::size_t>(v.dimension()))));
    } else {
      const double h = options.h_sup_slope * j + options.h_sup_offset;
      const int half = static_cast<int>(std::ceil(j / h));
      const double step = static_cast<double>(j) / half;  // <= h, hits +-j exactly
      if (v.dimension() == 1) {
        for (int i = -half; i <= half && sup < cap; ++i) {
          const double x = i * step;
          sup = std::max(sup, std::abs(v.at(x) - u.at(x)));
        }
      } else {
        const double r2 = static_cast<double>(j) * j;
        for (int i = -half; i <= half && sup < cap; ++i) {
          for (int k = -half; k <= half && sup < cap; ++k) {
            const double x = i * step;
            const double y = k * step;
            if (x * x + y * y > r2) continue;
            sup = std::max(sup, std::abs(v.at(x, y) - u.at(x, y)));
          }
        }
      }
    }
    out.value += std::min(cap, sup);
  }
  return out;
}

MetricValue metric_d_to_tolerance(const Potential& v, const Potential& u, double tail_tol,
                                  const MetricOptions& options) {
  if (!(tail_tol > 0.0) || !(tail_tol < 2.0)) throw DomainError("metric_d: tail_tol must lie in (0, 2)");
  const int max_index = std::max(0, static_cast<int>(std::ceil(1.0 - std::log2(tail_tol))));
  return metric_d(v, u, max_index, options);
}

Potential sample_potential(const Potential& v, double origin, double spacing, int points) {
  if (points < 2 || !(spacing > 0.0)) throw DomainError("sample_potential: need points >= 2 and spacing > 0");
  Potential::Sampled s{origin, spacing, points, {}};
  if (v.dimension() == 1) {
    s.values.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) s.values.push_back(v.at(origin + i * spacing));
  } else {
    s.values.reserve(static_cast<std::size_t>(points) * points);
    for (int i = 0; i < points; ++i) {
      for (int j = 0; j < points; ++j) s.values.push_back(v.at(origin + i * spacing, origin + j * spacing));
    }
  }
  return Potential(v.a_bound(), v.dimension(), std::move(s));
}

}  // namespace semistab
