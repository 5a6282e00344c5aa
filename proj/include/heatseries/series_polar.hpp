#pragma once

/// W-polynomial series for radial fields, s = tau + beta, measure xi dxi on [0, inf).
///
///   PD-A  u = exp(-r^2/4s)/(2s) sum_j W_j(r/2sqrt(s)) (beta/s)^j j!^2/(2j)!^2 f_j,
///         f_j = integral xi W_j(xi/2sqrt(beta)) f(xi) dxi
///   PD-B  u = sum_j W_j(r/2sqrt(beta)) (beta/s)^j j!^2/(2j)!^2 f_j,
///         f_j = integral xi exp(-xi^2/4s)/(2s) W_j(xi/2sqrt(s)) f(xi) dxi
///   PD-C  u = (1/2pi) sum_j (-1)^j beta^j j! / ((2j)! s^(j+1)) f_j(r),
///         f_j(r) = integral xi f(xi) integral_0^pi W_j(rho/2sqrt(beta)) dphi dxi,
///         rho^2 = r^2 + xi^2 - 2 r xi cos(phi)
/// PI-A/B/C: the same shapes with beta and s exchanged and u as data.

#include <span>
#include <vector>

#include "heatseries/series.hpp"

namespace heatseries {

std::vector<double> pd_coeffs(Variant v, const Data& f, const KernelParams& params, int n, double r_center,
                              const QuadSpec& spec = {}, ConstantsMode mode = ConstantsMode::OracleValidated);

EvalResult pd_eval(Variant v, std::span<const double> coeffs, const KernelParams& params, double r,
                   ConstantsMode mode = ConstantsMode::OracleValidated);

std::vector<double> pi_coeffs(Variant v, const Data& u, const KernelParams& params, int n, double r_center,
                              const QuadSpec& spec = {}, ConstantsMode mode = ConstantsMode::OracleValidated);

EvalResult pi_eval(Variant v, std::span<const double> coeffs, const KernelParams& params, double r,
                   ConstantsMode mode = ConstantsMode::OracleValidated);

/// Number of Gauss-Legendre nodes on [0, pi] that resolves the angular
/// averages of W_0..W_n(rho/2sqrt(scale)) for xi up to xi_max at radius r:
/// 64, doubled until the result changes by less than rel_tol.
int angular_nodes(int n, double r, double xi_max, double scale, double rel_tol);

}  // namespace heatseries
