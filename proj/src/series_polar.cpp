#include "heatseries/series_polar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "series_detail.hpp"

namespace heatseries {

namespace {

void require_family(Variant v, bool inverse, const char* op) {
  if (geometry_of(v) != Geometry::Polar || is_inverse(v) != inverse) {
    throw std::invalid_argument(std::string(op) + ": unsupported variant " + to_string(v));
  }
}

std::vector<double> coeffs_for(Variant v, const Data& d, const KernelParams& params, int n, double r_center,
                               const QuadSpec& spec, ConstantsMode mode) {
  params.validate();
  return detail::moments(detail::make_plan(v, params, mode), d, n, r_center, spec);
}

// Angular integrals of W_0..W_n(rho/2sqrt(scale)) over [0, pi] and the matching
// sums of absolute contributions.
void angular(int n, double r, double xi, double scale, int nodes, std::vector<double>& val,
             std::vector<double>& mag) {
  const GaussRule& rule = gauss_legendre(nodes);
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  std::vector<double> w(m);
  val.assign(m, 0.0);
  mag.assign(m, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double phi = 0.5 * std::numbers::pi * (rule.nodes[i] + 1.0);
    const double weight = 0.5 * std::numbers::pi * rule.weights[i];
    const double rho2 = std::max(0.0, r * r + xi * xi - 2.0 * r * xi * std::cos(phi));
    w_poly_eval_all(std::sqrt(rho2) / (2.0 * std::sqrt(scale)), w);
    for (std::size_t j = 0; j < m; ++j) {
      val[j] += weight * w[j];
      mag[j] += weight * std::fabs(w[j]);
    }
  }
}

}  // namespace

std::vector<double> pd_coeffs(Variant v, const Data& f, const KernelParams& params, int n, double r_center,
                              const QuadSpec& spec, ConstantsMode mode) {
  require_family(v, false, "pd_coeffs");
  return coeffs_for(v, f, params, n, r_center, spec, mode);
}

EvalResult pd_eval(Variant v, std::span<const double> coeffs, const KernelParams& params, double r,
                   ConstantsMode mode) {
  require_family(v, false, "pd_eval");
  return evaluate_series(v, coeffs, params, r, mode);
}

std::vector<double> pi_coeffs(Variant v, const Data& u, const KernelParams& params, int n, double r_center,
                              const QuadSpec& spec, ConstantsMode mode) {
  require_family(v, true, "pi_coeffs");
  return coeffs_for(v, u, params, n, r_center, spec, mode);
}

EvalResult pi_eval(Variant v, std::span<const double> coeffs, const KernelParams& params, double r,
                   ConstantsMode mode) {
  require_family(v, true, "pi_eval");
  return evaluate_series(v, coeffs, params, r, mode);
}

int angular_nodes(int n, double r, double xi_max, double scale, double rel_tol) {
  constexpr int kStart = 64;
  constexpr int kMax = 1024;
  if (r == 0.0 || xi_max <= 0.0) return kStart;
  // The widest angular variation occurs at the outer radius; probe a few radii.
  const double probes[] = {r, 0.5 * (r + xi_max), xi_max};
  int nodes = kStart;
  std::vector<double> coarse, fine, mag, mag_fine;
  while (nodes < kMax) {
    bool ok = true;
    for (double xi : probes) {
      angular(n, r, xi, scale, nodes, coarse, mag);
      angular(n, r, xi, scale, 2 * nodes, fine, mag_fine);
      for (std::size_t j = 0; j < coarse.size() && ok; ++j) {
        if (std::fabs(fine[j] - coarse[j]) > rel_tol * std::max(std::fabs(fine[j]), 1e-3 * mag_fine[j])) ok = false;
      }
    }
    if (ok) return nodes;
    nodes *= 2;
  }
  return kMax;
}

}  // namespace heatseries
