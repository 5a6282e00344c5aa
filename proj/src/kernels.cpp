#include "heatseries/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatseries/specfun.hpp"

namespace heatseries {

namespace {

void require_tau(double tau, const char* op) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument(std::string(op) + ": tau must be finite and > 0");
  }
}

const AnalyticProfile* analytic_of(const Data& f, Geometry g, const char* op) {
  const auto* p = std::get_if<AnalyticProfile>(&f);
  if (p && p->geometry() != g) {
    throw std::invalid_argument(std::string(op) + ": profile geometry is " + to_string(p->geometry()));
  }
  return p;
}

std::optional<double> closed_form(const AnalyticProfile* p, double tau, double x) {
  if (!p) return std::nullopt;
  const auto e = p->evolved(tau);
  if (!e) return std::nullopt;
  return (*e)(x);
}

}  // namespace

double forward_line(const Data& f, double tau, double x, const QuadSpec& spec, ForwardMethod method) {
  require_tau(tau, "forward_line");
  const AnalyticProfile* p = analytic_of(f, Geometry::Line, "forward_line");
  if (method != ForwardMethod::Quadrature) {
    if (auto v = closed_form(p, tau, x)) return *v;
    if (method == ForwardMethod::ClosedForm) {
      throw std::invalid_argument("forward_line: no closed form for this data");
    }
  }
  const double reach = spec.truncation_radius_sigmas * std::sqrt(2.0 * tau);
  const Interval support = data_support(f, spec);
  const Interval window{std::max(x - reach, support.lo), std::min(x + reach, support.hi)};
  if (window.empty()) return 0.0;
  const auto bp = data_breakpoints(f);
  const double norm = 1.0 / (2.0 * std::sqrt(std::numbers::pi * tau));
  const Integrand g = [&](double xi) {
    const double d = x - xi;
    return norm * std::exp(-d * d / (4.0 * tau)) * evaluate(f, xi);
  };
  return integrate(g, window, bp, spec).value;
}

double forward_polar(const Data& f, double tau, double r, const QuadSpec& spec, ForwardMethod method) {
  require_tau(tau, "forward_polar");
  if (r < 0.0) throw std::invalid_argument("forward_polar: r must be >= 0");
  const AnalyticProfile* p = analytic_of(f, Geometry::Polar, "forward_polar");
  if (method != ForwardMethod::Quadrature) {
    if (auto v = closed_form(p, tau, r)) return *v;
    if (method == ForwardMethod::ClosedForm) {
      throw std::invalid_argument("forward_polar: no closed form for this data");
    }
  }
  // The scaled kernel is bounded by exp(-(r - xi)^2 / (4 tau)) / (2 tau).
  const double reach = spec.truncation_radius_sigmas * std::sqrt(2.0 * tau);
  const Interval support = data_support(f, spec);
  const Interval window{std::max({r - reach, support.lo, 0.0}), std::min(r + reach, support.hi)};
  if (window.empty()) return 0.0;
  const auto bp = data_breakpoints(f);
  const Integrand g = [&](double xi) { return xi * scaled_polar_kernel(r, xi, tau) * evaluate(f, xi); };
  return integrate(g, window, bp, spec).value;
}

double forward(const Data& f, Geometry g, double tau, double x, const QuadSpec& spec, ForwardMethod method) {
  return g == Geometry::Line ? forward_line(f, tau, x, spec, method) : forward_polar(f, tau, x, spec, method);
}

IdentityCheck weber_integral_check(double r, double xi, double t, const QuadSpec& spec) {
  require_tau(t, "weber_integral_check");
  if (r < 0.0 || xi < 0.0) throw std::invalid_argument("weber_integral_check: radii must be >= 0");
  const double lambda_max = std::sqrt(30.0 * std::numbers::ln10 / t);
  const Integrand g = [&](double lambda) {
    return lambda * std::exp(-lambda * lambda * t) * bessel_j0(lambda * r) * bessel_j0(lambda * xi);
  };
  IdentityCheck out;
  out.lhs = integrate(g, IntegrandDomain::finite(0.0, lambda_max), spec).value;
  out.rhs = scaled_polar_kernel(r, xi, t);
  return out;
}

IdentityCheck j0_product_check(double lambda, double x, double y, const QuadSpec& spec) {
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("j0_product_check: radii must be >= 0");
  const Integrand g = [&](double phi) {
    const double rho2 = std::max(0.0, x * x + y * y - 2.0 * x * y * std::cos(phi));
    return bessel_j0(lambda * std::sqrt(rho2));
  };
  IdentityCheck out;
  out.lhs = bessel_j0(lambda * x) * bessel_j0(lambda * y);
  out.rhs = integrate(g, IntegrandDomain::finite(0.0, std::numbers::pi), spec).value / std::numbers::pi;
  return out;
}

}  // namespace heatseries
