#pragma once

// Bounded potentials -a <= V <= 0 on R^nu (nu = 1, 2): the coordinates of the
// space of Schroedinger operators Delta + V, the metric on that space, and
// the truncation and shift sequences used to approximate a given potential.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace semistab {

class Potential {
 public:
  /// V = value everywhere.
  struct Constant {
    double value;
  };
  /// V = -depth * exp(-|x|^2 / width^2).
  struct GaussianWell {
    double depth;
    double width;
  };
  /// V = -depth * exp(-|x| / scale).
  struct ExponentialWell {
    double depth;
    double scale;
  };
  /// V = -depth on |x| <= radius, 0 outside.
  struct SquareWell {
    double depth;
    double radius;
  };
  /// Values on the uniform grid origin + i * spacing (i = 0..points-1 per
  /// axis, row-major with the last axis fastest); multilinear in between,
  /// 0 outside the grid hull.
  struct Sampled {
    double origin;
    double spacing;
    int points;
    std::vector<double> values;
  };
  /// chi_{B(0,k)} * base, with B(0,k) the open ball |x| < k.
  struct Truncated {
    std::shared_ptr<const Potential> base;
    double k;
  };
  /// (l / (l+1)) * base - a / (l+1).
  struct Shifted {
    std::shared_ptr<const Potential> base;
    int l;
  };
  using Form = std::variant<Constant, GaussianWell, ExponentialWell, SquareWell, Sampled, Truncated, Shifted>;

  /// Throws InvariantViolation unless -a_bound <= V <= 0: on every sample for
  /// sampled forms, otherwise at 10^4 seeded random points of [-100, 100]^nu.
  Potential(double a_bound, int dimension, Form form);

  [[nodiscard]] double a_bound() const { return a_bound_; }
  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] const Form& form() const { return *form_; }

  /// x must have exactly dimension() coordinates.
  [[nodiscard]] double operator()(std::span<const double> x) const;
  [[nodiscard]] double at(double x) const;
  [[nodiscard]] double at(double x, double y) const;

  /// R such that V = 0 for |x| >= R, if the form guarantees one.
  [[nodiscard]] std::optional<double> support_radius() const;

  /// One-line human-readable description, e.g. "gaussian-well(depth=1,width=1)".
  [[nodiscard]] std::string describe() const;

 private:
  double a_bound_;
  int dimension_;
  std::shared_ptr<const Form> form_;
};

/// V_k = chi_{B(0,k)} V; k >= 1.
[[nodiscard]] Potential truncate_potential(const Potential& v, int k);

/// V_l = (l/(l+1)) V - a/(l+1); requires l >= 1 and a == v.a_bound().
[[nodiscard]] Potential shift_potential(const Potential& v, int l, double a);

struct MetricOptions {
  /// sup over B(0,j) is sampled on a grid of spacing slope * j + offset.
  double h_sup_slope = 0.01;
  double h_sup_offset = 0.01;
};

struct MetricValue {
  double value = 0.0;      // sum_{j=0}^{J} min(2^-j, sup_{|x|<=j} |V - U|)
  double tail_bound = 0.0;  // sum_{j>J} 2^-j = 2^-J
  int terms = 0;            // J
};

/// Throws DomainError for potentials of different dimension or bound.
[[nodiscard]] MetricValue metric_d(const Potential& v, const Potential& u, int max_index,
                                   const MetricOptions& options = {});
/// Chooses the smallest J with 2^(1-J) <= tail_tol.
[[nodiscard]] MetricValue metric_d_to_tolerance(const Potential& v, const Potential& u, double tail_tol,
                                                const MetricOptions& options = {});

/// Sampled potential from values of v on its own grid; used by tests and
/// the text format.
[[nodiscard]] Potential sample_potential(const Potential& v, double origin, double spacing, int points);

// Text descriptor: one "key value" pair per line, '#' comments.
//   kind     constant | gaussian-well | exponential-well | square-well | sampled
//   a_bound  <a>
//   dim      1 | 2
//   value | depth | width | scale | radius    (per kind)
//   origin, spacing, points, values           (sampled)
//   truncate <k>    optional, applied first
//   shift <l>       optional, applied after truncate
[[nodiscard]] Potential potential_from_fields(const std::map<std::string, std::string>& fields);
[[nodiscard]] Potential read_potential(std::istream& in);
[[nodiscard]] Potential parse_potential(const std::string& text);
[[nodiscard]] Potential load_potential(const std::filesystem::path& path);

}  // namespace semistab
