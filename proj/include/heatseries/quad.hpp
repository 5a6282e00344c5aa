#pragma once

/// Adaptive composite Gauss-Legendre quadrature shared by every oracle and
/// every series coefficient.
///
/// Infinite domains are truncated at +-truncation_radius_sigmas * decay_scale
/// around a declared centre. Panels are bisected greedily (largest normalised
/// error first) until every component meets
///
///     err <= max(abs_tol, rel_tol * |value|, 64 eps * integral(|f|)),
///
/// the last term being the round-off floor of the integrand itself. The
/// error estimate of a panel is |G(panel) - G(left) - G(right)|.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatseries {

struct QuadSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double truncation_radius_sigmas = 12.0;
  int max_panels = 4096;
  int nodes_per_panel = 16;

  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool empty() const { return !(hi > lo); }
};

struct IntegrandDomain {
  enum class Kind { FiniteInterval, WholeLine, HalfLine };

  Kind kind = Kind::FiniteInterval;
  double a = 0.0;  // FiniteInterval bounds
  double b = 0.0;
  double decay_scale = 1.0;  // infinite domains
  double center = 0.0;       // WholeLine only

  static IntegrandDomain finite(double a, double b);
  static IntegrandDomain whole_line(double decay_scale, double center = 0.0);
  static IntegrandDomain half_line(double decay_scale);

  /// The finite interval actually integrated under `spec`.
  Interval truncated(const QuadSpec& spec) const;
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
};

struct BatchQuadResult {
  std::vector<double> values;
  std::vector<double> err_estimates;
};

/// Thrown when max_panels bisections do not reach the tolerance; carries the
/// best available estimate.
class AccuracyNotReached : public std::runtime_error {
 public:
  AccuracyNotReached(const std::string& what, BatchQuadResult best)
      : std::runtime_error(what), best_(std::move(best)) {}

  const BatchQuadResult& best() const { return best_; }
  double value() const { return best_.values.empty() ? 0.0 : best_.values.front(); }

 private:
  BatchQuadResult best_;
};

using Integrand = std::function<double(double)>;

/// Vector integrand: writes `out.size()` components at abscissa x.
using BatchIntegrand = std::function<void(double x, std::span<double> out)>;

QuadResult integrate(const Integrand& f, const IntegrandDomain& domain, const QuadSpec& spec = {});

/// Integrate over [lo, hi] with mandatory panel breakpoints (kinks, support
/// edges). Breakpoints outside the interval are ignored.
QuadResult integrate(const Integrand& f, Interval range, std::span<const double> breakpoints,
                     const QuadSpec& spec = {});

BatchQuadResult integrate_batch(const BatchIntegrand& f, std::size_t components, Interval range,
                                std::span<const double> breakpoints, const QuadSpec& spec = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

/// Closed form of integral H_j(y) exp(-c y^2) dy over the real line:
/// 0 for odd j, sqrt(pi/c) ((1-c)/c)^k (2k)!/k! for j = 2k.
double hermite_moment(int j, double c);

/// Closed form of integral_0^inf 2 y W_j(y) exp(-c y^2) dy
/// = (-1)^j (2j)!/j! (c-1)^j / c^(j+1).
double w_moment(int j, double c);

}  // namespace heatseries
