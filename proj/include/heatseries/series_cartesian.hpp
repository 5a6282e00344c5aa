#pragma once

/// Hermite series for the heat equation on the line.
///
/// Direct (u from f, s = tau + beta):
///   CD-A  u = G_s(x) sum_j H_j(x/2sqrt(s)) beta^(j/2) / ((2sqrt(s))^j j!) f_j,
///         f_j = integral H_j(xi/2sqrt(beta)) f(xi) dxi
///   CD-B  u = sum_j H_j(x/2sqrt(beta)) beta^(j/2) / ((2sqrt(s))^j j!) f_j,
///         f_j = integral G_s(xi) H_j(xi/2sqrt(s)) f(xi) dxi
///   CD-C  u = (1/sqrt(pi)) sum_k (-1)^k beta^k / (k! (2sqrt(s))^(2k+1)) f_k(x),
///         f_k(x) = integral H_2k((x - xi)/2sqrt(beta)) f(xi) dxi
/// Inverse: the same three shapes with beta and s exchanged and u as data.
/// CI-classical: f(x) = sum_j u^(j)(0) tau^(j/2) H_j(x/2sqrt(tau)) / j!.
///
/// G_t(x) = exp(-x^2/4t) / (2 sqrt(pi t)).

#include <span>
#include <vector>

#include "heatseries/series.hpp"

namespace heatseries {

std::vector<double> cd_coeffs(Variant v, const Data& f, const KernelParams& params, int n, double x_center,
                              const QuadSpec& spec = {}, ConstantsMode mode = ConstantsMode::OracleValidated);

EvalResult cd_eval(Variant v, std::span<const double> coeffs, const KernelParams& params, double x,
                   ConstantsMode mode = ConstantsMode::OracleValidated);

std::vector<double> ci_coeffs(Variant v, const Data& u, const KernelParams& params, int n, double x_center,
                              const QuadSpec& spec = {}, ConstantsMode mode = ConstantsMode::OracleValidated);

EvalResult ci_eval(Variant v, std::span<const double> coeffs, const KernelParams& params, double x,
                   ConstantsMode mode = ConstantsMode::OracleValidated);

/// u^(0..n)(0): analytic for profiles, central finite differences on the
/// grid for sampled data (stencil 2*ceil(j/2)+1 nodes, spacing h).
std::vector<double> derivatives_at_zero(const Data& u, int n);

EvalResult ci_classical(const Data& u, double tau, int n, double x,
                        ConstantsMode mode = ConstantsMode::OracleValidated);

/// Finite-difference weights for the m-th derivative at x0 on arbitrary nodes.
std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int m);

}  // namespace heatseries
