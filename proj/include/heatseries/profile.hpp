#pragma once

/// Ground-truth initial/terminal fields.
///
/// `AnalyticProfile` is a closed-form function on the line or a radial
/// function in the plane, with exact heat evolution where one exists.
/// `Sampled1D` carries sampled (possibly noisy) data; it is linearly
/// interpolated between nodes and zero-extended outside its interval.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "heatseries/quad.hpp"

namespace heatseries {

enum class Geometry { Line, Polar };

std::string to_string(Geometry g);

/// amplitude * exp(-(x - center)^2 / (4 width_a)).
struct Gaussian {
  double amplitude = 1.0;
  double center = 0.0;
  double width_a = 1.0;
};

struct Mixture {
  std::vector<Gaussian> components;
};

/// amplitude * exp(1 - 1/(1 - s^2)) for |s| < 1, s = (x - center)/radius.
struct Bump {
  double center = 0.0;
  double radius = 1.0;
  double amplitude = 1.0;
};

/// Heat-invariant mode of order m.
/// Line:  amplitude * H_m(y) exp(-y^2),  y = (x - center)/(2 sqrt(a)).
/// Polar: amplitude * L_m(v) exp(-v),    v = r^2/(4a)  (center must be 0).
struct Mode {
  int order = 0;
  double amplitude = 1.0;
  double center = 0.0;
  double width_a = 1.0;
};

/// Line:  sum_k c_k x^k.   Polar: sum_k c_k r^(2k).
struct Polynomial {
  std::vector<double> coefficients;
};

class AnalyticProfile {
 public:
  using Shape = std::variant<Gaussian, Mixture, Bump, Mode, Polynomial>;

  AnalyticProfile(Shape shape, Geometry geometry = Geometry::Line);

  static AnalyticProfile gaussian(double width_a, double amplitude = 1.0, double center = 0.0,
                                  Geometry g = Geometry::Line);

  const Shape& shape() const { return shape_; }
  Geometry geometry() const { return geometry_; }

  double operator()(double x) const;

  /// Exact heat evolution by `tau` (negative tau = backward, defined while
  /// every width stays positive). Nullopt for Bump.
  std::optional<AnalyticProfile> evolved(double tau) const;

  /// j-th x-derivative at x (line geometry). Nullopt for Bump.
  std::optional<double> derivative(int j, double x) const;

  /// Interval outside which the profile is negligible (|.| < e^{-R^2/2} relative),
  /// padded by `extra_sigmas` Gaussian widths. Infinite for polynomials.
  Interval support(const QuadSpec& spec, double extra_sigmas = 0.0) const;

  /// Points where the profile is not smooth.
  std::vector<double> breakpoints() const;

  std::string describe() const;

 private:
  Shape shape_;
  Geometry geometry_;
};

struct Sampled1D {
  Interval domain;
  std::vector<double> values;

  Sampled1D() = default;
  Sampled1D(Interval domain, std::vector<double> values);

  /// Samples `f` at n uniform nodes on [a, b].
  template <class F>
  static Sampled1D sample(F&& f, double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = f(a + h * i);
    return Sampled1D({a, b}, std::move(v));
  }

  int n_nodes() const { return static_cast<int>(values.size()); }
  double spacing() const { return domain.length() / (n_nodes() - 1); }
  double node(int i) const { return domain.lo + spacing() * i; }

  /// Linear interpolation, zero outside the domain.
  double operator()(double x) const;

  std::vector<double> nodes() const;
};

using Data = std::variant<AnalyticProfile, Sampled1D>;

/// Uniform read access to either kind of data.
double evaluate(const Data& d, double x);
Interval data_support(const Data& d, const QuadSpec& spec, double extra_sigmas = 0.0);
std::vector<double> data_breakpoints(const Data& d);

/// Scale estimate a from second moments of |f|: variance/2 on the line,
/// <r^2>/4 under the r dr measure in polar geometry.
double estimate_scale(const Data& d, Geometry g, const QuadSpec& spec = {});

/// Reads sampled data: one `x,value` pair per line, `#` comments, uniform nodes.
/// Columns after the second are ignored; one leading column-name row is allowed.
Sampled1D parse_sampled(const std::string& text);

}  // namespace heatseries
