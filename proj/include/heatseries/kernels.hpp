#pragma once

/// Reference solvers for the heat equation: forward evolution by direct
/// kernel quadrature (Poisson kernel on the line, Weber kernel for radial
/// fields in the plane), and two-sided checks of the kernel identities the
/// polar series are built on.

#include "heatseries/profile.hpp"
#include "heatseries/quad.hpp"

namespace heatseries {

enum class ForwardMethod {
  Auto,        // closed form when the profile has one, quadrature otherwise
  ClosedForm,  // throws std::invalid_argument if unavailable
  Quadrature,
};

/// u(tau, x) = integral exp(-(x - xi)^2 / (4 tau)) / (2 sqrt(pi tau)) f(xi) dxi.
/// Sampled data is zero outside its interval.
double forward_line(const Data& f, double tau, double x, const QuadSpec& spec = {},
                    ForwardMethod method = ForwardMethod::Auto);

/// u(tau, r) = integral_0^inf xi K(r, xi, tau) f(xi) dxi with
/// K = exp(-(r^2 + xi^2) / (4 tau)) I0(r xi / (2 tau)) / (2 tau).
double forward_polar(const Data& f, double tau, double r, const QuadSpec& spec = {},
                     ForwardMethod method = ForwardMethod::Auto);

double forward(const Data& f, Geometry g, double tau, double x, const QuadSpec& spec = {},
               ForwardMethod method = ForwardMethod::Auto);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = integral_0^inf lambda exp(-lambda^2 t) J0(lambda r) J0(lambda xi) dlambda
/// (cut where exp(-lambda^2 t) < 1e-30), rhs = scaled_polar_kernel(r, xi, t).
IdentityCheck weber_integral_check(double r, double xi, double t, const QuadSpec& spec = {});

/// lhs = J0(lambda x) J0(lambda y),
/// rhs = (1/pi) integral_0^pi J0(lambda sqrt(x^2 + y^2 - 2 x y cos phi)) dphi.
IdentityCheck j0_product_check(double lambda, double x, double y, const QuadSpec& spec = {});

}  // namespace heatseries
