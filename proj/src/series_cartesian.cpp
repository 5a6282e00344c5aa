#include "heatseries/series_cartesian.hpp"

#include <cmath>
#include <stdexcept>

#include "series_detail.hpp"

namespace heatseries {

namespace {

void require_family(Variant v, bool inverse, const char* op) {
  const bool ok = geometry_of(v) == Geometry::Line && is_inverse(v) == inverse && v != Variant::CI_Classical;
  if (!ok) throw std::invalid_argument(std::string(op) + ": unsupported variant " + to_string(v));
}

std::vector<double> coeffs_for(Variant v, const Data& d, const KernelParams& params, int n, double x_center,
                               const QuadSpec& spec, ConstantsMode mode) {
  params.validate();
  return detail::moments(detail::make_plan(v, params, mode), d, n, x_center, spec);
}

}  // namespace

std::vector<double> cd_coeffs(Variant v, const Data& f, const KernelParams& params, int n, double x_center,
                              const QuadSpec& spec, ConstantsMode mode) {
  require_family(v, false, "cd_coeffs");
  return coeffs_for(v, f, params, n, x_center, spec, mode);
}

EvalResult cd_eval(Variant v, std::span<const double> coeffs, const KernelParams& params, double x,
                   ConstantsMode mode) {
  require_family(v, false, "cd_eval");
  return evaluate_series(v, coeffs, params, x, mode);
}

std::vector<double> ci_coeffs(Variant v, const Data& u, const KernelParams& params, int n, double x_center,
                              const QuadSpec& spec, ConstantsMode mode) {
  require_family(v, true, "ci_coeffs");
  return coeffs_for(v, u, params, n, x_center, spec, mode);
}

EvalResult ci_eval(Variant v, std::span<const double> coeffs, const KernelParams& params, double x,
                   ConstantsMode mode) {
  require_family(v, true, "ci_eval");
  return evaluate_series(v, coeffs, params, x, mode);
}

std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  if (m < 0 || n < m) throw std::invalid_argument("fornberg_weights: need more than m nodes");
  // c[i][k]: weight of node i for the k-th derivative.
  std::vector<std::vector<double>> c(nodes.size(), std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = c[i][static_cast<std::size_t>(m)];
  return w;
}

std::vector<double> derivatives_at_zero(const Data& u, int n) {
  if (n < 0) throw std::invalid_argument("derivatives_at_zero: order must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  if (const auto* p = std::get_if<AnalyticProfile>(&u)) {
    if (p->geometry() != Geometry::Line) throw std::invalid_argument("derivatives_at_zero: line data required");
    for (int j = 0; j <= n; ++j) {
      const auto d = p->derivative(j, 0.0);
      if (!d) throw std::invalid_argument("derivatives_at_zero: profile has no closed-form derivatives");
      if (!std::isfinite(*d)) throw OutOfRange("derivatives_at_zero: derivative " + std::to_string(j) + " overflows");
      out[static_cast<std::size_t>(j)] = *d;
    }
    return out;
  }
  const auto& s = std::get<Sampled1D>(u);
  const double h = s.spacing();
  const double t = -s.domain.lo / h;
  const long centre = std::lround(t);
  if (std::fabs(t - static_cast<double>(centre)) > 1e-6 || centre < 0 || centre >= s.n_nodes()) {
    throw std::invalid_argument("derivatives_at_zero: sampled grid has no node at x = 0");
  }
  for (int j = 0; j <= n; ++j) {
    const long half = (j + 1) / 2;
    if (centre - half < 0 || centre + half >= s.n_nodes()) {
      throw OutOfRange("derivatives_at_zero: stencil for derivative " + std::to_string(j) + " exceeds the grid");
    }
    std::vector<double> offsets;
    for (long k = -half; k <= half; ++k) offsets.push_back(static_cast<double>(k) * h);
    const auto w = fornberg_weights(0.0, offsets, j);
    double acc = 0.0;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      acc += w[k] * s.values[static_cast<std::size_t>(centre - half) + k];
    }
    if (!std::isfinite(acc)) throw OutOfRange("derivatives_at_zero: derivative " + std::to_string(j) + " overflows");
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

EvalResult ci_classical(const Data& u, double tau, int n, double x, ConstantsMode mode) {
  if (!(tau > 0.0)) throw std::invalid_argument("ci_classical: tau must be > 0");
  const auto d = derivatives_at_zero(u, n);
  return evaluate_series(Variant::CI_Classical, d, KernelParams{tau, 0.0}, x, mode);
}

}  // namespace heatseries
