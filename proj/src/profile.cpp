#include "heatseries/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "heatseries/specfun.hpp"

namespace heatseries {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double laguerre(int m, double v) {
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = 1.0 - v;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0 - v) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void check_gaussian(const Gaussian& g, Geometry geo) {
  if (!(g.width_a > 0.0)) throw std::invalid_argument("Gaussian profile: width_a must be > 0");
  if (geo == Geometry::Polar && g.center != 0.0) {
    throw std::invalid_argument("Gaussian profile: radial profiles must be centred at 0");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double bump_value(const Bump& b, double x) {
  const double s = (x - b.center) / b.radius;
  if (std::fabs(s) >= 1.0) return 0.0;
  return b.amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(Geometry g) { return g == Geometry::Line ? "line" : "polar"; }

AnalyticProfile::AnalyticProfile(Shape shape, Geometry geometry)
    : shape_(std::move(shape)), geometry_(geometry) {
  std::visit(Overloaded{
                 [&](const Gaussian& g) { check_gaussian(g, geometry_); },
                 [&](const Mixture& m) {
                   if (m.components.empty()) throw std::invalid_argument("Mixture profile: no components");
                   for (const auto& g : m.components) check_gaussian(g, geometry_);
                 },
                 [&](const Bump& b) {
                   if (!(b.radius > 0.0)) throw std::invalid_argument("Bump profile: radius must be > 0");
                 },
                 [&](const Mode& m) {
                   if (m.order < 0) throw std::invalid_argument("Mode profile: order must be >= 0");
                   check_gaussian({m.amplitude, m.center, m.width_a}, geometry_);
                 },
                 [&](const Polynomial& p) {
                   if (p.coefficients.empty()) throw std::invalid_argument("Polynomial profile: no coefficients");
                 },
             },
             shape_);
}

AnalyticProfile AnalyticProfile::gaussian(double width_a, double amplitude, double center, Geometry g) {
  return AnalyticProfile(Gaussian{amplitude, center, width_a}, g);
}

double AnalyticProfile::operator()(double x) const {
  const bool polar = geometry_ == Geometry::Polar;
  auto gauss = [](const Gaussian& g, double t) {
    const double d = t - g.center;
    return g.amplitude * std::exp(-d * d / (4.0 * g.width_a));
  };
  return std::visit(Overloaded{
                        [&](const Gaussian& g) { return gauss(g, x); },
                        [&](const Mixture& m) {
                          double s = 0.0;
                          for (const auto& g : m.components) s += gauss(g, x);
                          return s;
                        },
                        [&](const Bump& b) { return bump_value(b, x); },
                        [&](const Mode& m) {
                          if (polar) {
                            const double v = x * x / (4.0 * m.width_a);
                            return m.amplitude * laguerre(m.order, v) * std::exp(-v);
                          }
                          const double y = (x - m.center) / (2.0 * std::sqrt(m.width_a));
                          return m.amplitude * hermite_eval(m.order, y) * std::exp(-y * y);
                        },
                        [&](const Polynomial& p) {
                          const double t = polar ? x * x : x;
                          double s = 0.0;
                          for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) s = s * t + *it;
                          return s;
                        },
                    },
                    shape_);
}

std::optional<AnalyticProfile> AnalyticProfile::evolved(double tau) const {
  const bool polar = geometry_ == Geometry::Polar;
  auto evolve_gauss = [&](Gaussian g) -> std::optional<Gaussian> {
    const double a_new = g.width_a + tau;
    if (!(a_new > 0.0)) return std::nullopt;
    const double ratio = g.width_a / a_new;
    g.amplitude *= polar ? ratio : std::sqrt(ratio);
    g.width_a = a_new;
    return g;
  };
  return std::visit(
      Overloaded{
          [&](const Gaussian& g) -> std::optional<AnalyticProfile> {
            auto e = evolve_gauss(g);
            if (!e) return std::nullopt;
            return AnalyticProfile(*e, geometry_);
          },
          [&](const Mixture& m) -> std::optional<AnalyticProfile> {
            Mixture out;
            for (const auto& g : m.components) {
              auto e = evolve_gauss(g);
              if (!e) return std::nullopt;
              out.components.push_back(*e);
            }
            return AnalyticProfile(out, geometry_);
          },
          [&](const Bump&) -> std::optional<AnalyticProfile> { return std::nullopt; },
          [&](const Mode& m) -> std::optional<AnalyticProfile> {
            const double a_new = m.width_a + tau;
            if (!(a_new > 0.0)) return std::nullopt;
            const double ratio = m.width_a / a_new;
            Mode out = m;
            out.width_a = a_new;
            out.amplitude *= polar ? std::pow(ratio, m.order + 1) : std::pow(ratio, 0.5 * (m.order + 1));
            return AnalyticProfile(out, geometry_);
          },
          [&](const Polynomial& p) -> std::optional<AnalyticProfile> {
            // Line: exp(tau D^2) x^k; polar: exp(tau Laplacian) r^(2k), Laplacian r^(2k) = 4k^2 r^(2k-2).
            const auto& c = p.coefficients;
            const std::size_t n = c.size();
            std::vector<double> out(n, 0.0);
            for (std::size_t target = 0; target < n; ++target) {
              double factor = 1.0;
              for (std::size_t m = 0;; ++m) {
                const std::size_t src = polar ? target + m : target + 2 * m;
                if (src >= n) break;
                out[target] += factor * c[src];
                // advance factor from m to m+1
                if (polar) {
                  const double k = static_cast<double>(target + m + 1);
                  factor *= tau * 4.0 * k * k / static_cast<double>(m + 1);
                } else {
                  const double k1 = static_cast<double>(target + 2 * m + 1);
                  const double k2 = static_cast<double>(target + 2 * m + 2);
                  factor *= tau * k1 * k2 / static_cast<double>(m + 1);
                }
              }
            }
            return AnalyticProfile(Polynomial{out}, geometry_);
          },
      },
      shape_);
}

std::optional<double> AnalyticProfile::derivative(int j, double x) const {
  if (j < 0) throw std::invalid_argument("derivative: order must be >= 0");
  if (geometry_ != Geometry::Line) return std::nullopt;
  auto mode_derivative = [&](int order, double amp, double center, double a) {
    const double s = 2.0 * std::sqrt(a);
    const double y = (x - center) / s;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return amp * sign * std::pow(s, -j) * hermite_eval(order + j, y) * std::exp(-y * y);
  };
  return std::visit(Overloaded{
                        [&](const Gaussian& g) -> std::optional<double> {
                          return mode_derivative(0, g.amplitude, g.center, g.width_a);
                        },
                        [&](const Mixture& m) -> std::optional<double> {
                          double s = 0.0;
                          for (const auto& g : m.components) s += mode_derivative(0, g.amplitude, g.center, g.width_a);
                          return s;
                        },
                        [&](const Bump&) -> std::optional<double> { return std::nullopt; },
                        [&](const Mode& m) -> std::optional<double> {
                          return mode_derivative(m.order, m.amplitude, m.center, m.width_a);
                        },
                        [&](const Polynomial& p) -> std::optional<double> {
                          double s = 0.0;
                          for (std::size_t k = static_cast<std::size_t>(j); k < p.coefficients.size(); ++k) {
                            double falling = 1.0;
                            for (int i = 0; i < j; ++i) falling *= static_cast<double>(k - static_cast<std::size_t>(i));
                            s += p.coefficients[k] * falling * std::pow(x, static_cast<double>(k) - j);
                          }
                          return s;
                        },
                    },
                    shape_);
}

Interval AnalyticProfile::support(const QuadSpec& spec, double extra_sigmas) const {
  const double radius_sigmas = spec.truncation_radius_sigmas + extra_sigmas;
  auto around = [&](double center, double a, int order) {
    const double r = std::sqrt(2.0 * a) * radius_sigmas + 2.0 * std::sqrt(a * order);
    return Interval{center - r, center + r};
  };
  Interval iv = std::visit(Overloaded{
                               [&](const Gaussian& g) { return around(g.center, g.width_a, 0); },
                               [&](const Mixture& m) {
                                 Interval hull{kInf, -kInf};
                                 for (const auto& g : m.components) {
                                   const auto s = around(g.center, g.width_a, 0);
                                   hull.lo = std::min(hull.lo, s.lo);
                                   hull.hi = std::max(hull.hi, s.hi);
                                 }
                                 return hull;
                               },
                               [&](const Bump& b) { return Interval{b.center - b.radius, b.center + b.radius}; },
                               [&](const Mode& m) { return around(m.center, m.width_a, m.order); },
                               [&](const Polynomial&) { return Interval{-kInf, kInf}; },
                           },
                           shape_);
  if (geometry_ == Geometry::Polar) iv.lo = std::max(0.0, iv.lo);
  return iv;
}

std::vector<double> AnalyticProfile::breakpoints() const {
  if (const auto* b = std::get_if<Bump>(&shape_)) return {b->center - b->radius, b->center + b->radius};
  return {};
}

std::string AnalyticProfile::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Gaussian& g) {
                   os << "gaussian:a=" << fmt(g.width_a) << ",center=" << fmt(g.center) << ",amp=" << fmt(g.amplitude);
                 },
                 [&](const Mixture& m) {
                   os << "mixture:[";
                   for (std::size_t i = 0; i < m.components.size(); ++i) {
                     const auto& g = m.components[i];
                     if (i) os << ";";
                     os << "a=" << fmt(g.width_a) << ",center=" << fmt(g.center) << ",amp=" << fmt(g.amplitude);
                   }
                   os << "]";
                 },
                 [&](const Bump& b) {
                   os << "bump:center=" << fmt(b.center) << ",radius=" << fmt(b.radius) << ",amp=" << fmt(b.amplitude);
                 },
                 [&](const Mode& m) {
                   os << "mode:order=" << m.order << ",a=" << fmt(m.width_a) << ",center=" << fmt(m.center)
                      << ",amp=" << fmt(m.amplitude);
                 },
                 [&](const Polynomial& p) {
                   os << "poly:[";
                   for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
                     if (i) os << ";";
                     os << fmt(p.coefficients[i]);
                   }
                   os << "]";
                 },
             },
             shape_);
  return os.str();
}

Sampled1D::Sampled1D(Interval d, std::vector<double> v) : domain(d), values(std::move(v)) {
  if (values.size() < 2) throw std::invalid_argument("Sampled1D: need at least 2 nodes");
  if (!(domain.hi > domain.lo)) throw std::invalid_argument("Sampled1D: domain must have positive length");
  for (double x : values) {
    if (!std::isfinite(x)) throw std::invalid_argument("Sampled1D: non-finite sample");
  }
}

double Sampled1D::operator()(double x) const {
  if (x < domain.lo || x > domain.hi) return 0.0;
  const double h = spacing();
  const double t = (x - domain.lo) / h;
  auto i = static_cast<std::size_t>(std::floor(t));
  if (i >= values.size() - 1) return values.back();
  const double w = t - static_cast<double>(i);
  return values[i] * (1.0 - w) + values[i + 1] * w;
}

std::vector<double> Sampled1D::nodes() const {
  std::vector<double> out(values.size());
  for (int i = 0; i < n_nodes(); ++i) out[static_cast<std::size_t>(i)] = node(i);
  return out;
}

double evaluate(const Data& d, double x) {
  return std::visit([x](const auto& v) { return v(x); }, d);
}

Interval data_support(const Data& d, const QuadSpec& spec, double extra_sigmas) {
  if (const auto* p = std::get_if<AnalyticProfile>(&d)) return p->support(spec, extra_sigmas);
  return std::get<Sampled1D>(d).domain;
}

std::vector<double> data_breakpoints(const Data& d) {
  if (const auto* p = std::get_if<AnalyticProfile>(&d)) return p->breakpoints();
  return std::get<Sampled1D>(d).nodes();
}

double estimate_scale(const Data& d, Geometry g, const QuadSpec& spec) {
  Interval support = data_support(d, spec);
  if (g == Geometry::Polar) support.lo = std::max(0.0, support.lo);
  if (!std::isfinite(support.lo) || !std::isfinite(support.hi)) {
    throw std::invalid_argument("estimate_scale: data has no finite support");
  }
  const auto bp = data_breakpoints(d);
  const BatchIntegrand moments = [&](double x, std::span<double> out) {
    const double v = std::fabs(evaluate(d, x));
    out[0] = v;
    out[1] = x * v;
    out[2] = x * x * v;
    out[3] = x * x * x * v;
  };
  QuadSpec loose = spec;
  loose.rel_tol = std::max(spec.rel_tol, 1e-8);
  const auto r = integrate_batch(moments, 4, support, bp, loose);
  double a = 0.0;
  if (g == Geometry::Line) {
    const double m0 = r.values[0];
    if (!(m0 > 1e-300)) throw std::invalid_argument("estimate_scale: data has (near) zero mass");
    const double mean = r.values[1] / m0;
    a = 0.5 * (r.values[2] / m0 - mean * mean);
  } else {
    const double m0 = r.values[1];
    if (!(m0 > 1e-300)) throw std::invalid_argument("estimate_scale: data has (near) zero mass");
    a = 0.25 * r.values[3] / m0;
  }
  if (!std::isfinite(a) || !(a > 0.0)) throw std::invalid_argument("estimate_scale: non-finite or non-positive scale");
  return a;
}

Sampled1D parse_sampled(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> xs, vs;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("sampled data line " + std::to_string(lineno) + ": expected `x,value`");
    }
    try {
      std::size_t used = 0;
      const std::string xs_part = line.substr(0, comma);
      const std::string vs_part = line.substr(comma + 1);
      const double x = std::stod(xs_part, &used);
      const double v = std::stod(vs_part);
      xs.push_back(x);
      vs.push_back(v);
    } catch (const std::logic_error&) {
      // A leading column-name row (as written by the CLI) is skipped.
      if (xs.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      throw std::invalid_argument("sampled data line " + std::to_string(lineno) + ": malformed number");
    }
  }
  if (xs.size() < 2) throw std::invalid_argument("sampled data: need at least 2 rows");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(h > 0.0)) throw std::invalid_argument("sampled data: nodes must be increasing");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double expect = xs.front() + h * static_cast<double>(i);
    if (std::fabs(xs[i] - expect) > 1e-9 * std::max(1.0, std::fabs(expect)) + 1e-6 * h) {
      throw std::invalid_argument("sampled data: nodes are not uniformly spaced (row " + std::to_string(i + 1) + ")");
    }
  }
  return Sampled1D({xs.front(), xs.back()}, std::move(vs));
}

}  // namespace heatseries
