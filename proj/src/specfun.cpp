#include "heatseries/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace heatseries {

namespace {

void require_order(int j, const char* op) {
  if (j < 0) {
    std::ostringstream msg;
    msg << op << ": order must be non-negative, got " << j;
    throw std::invalid_argument(msg.str());
  }
}

void require_finite(double v, const char* op, int j, double z) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << op << ": value out of double range at order " << j << ", argument " << z;
    throw OutOfRange(msg.str());
  }
}

}  // namespace

void KernelParams::validate() const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("KernelParams: tau must be finite and >= 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("KernelParams: beta must be finite and > 0");
  }
}

std::vector<double> PolynomialFamily::evaluate(double z) const {
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
  evaluate_into(z, out);
  return out;
}

void PolynomialFamily::evaluate_into(double z, std::span<double> out) const {
  if (kind == PolynomialKind::Hermite) {
    hermite_eval_all(z, out);
  } else {
    w_poly_eval_all(z, out);
  }
}

void hermite_eval_all(double z, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  out[0] = 1.0;
  if (n == 1) return;
  out[1] = 2.0 * z;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    out[j + 1] = 2.0 * z * out[j] - 2.0 * static_cast<double>(j) * out[j - 1];
  }
  require_finite(out[n - 1], "hermite_eval", static_cast<int>(n - 1), z);
}

std::vector<double> hermite_eval_all(int max_order, double z) {
  require_order(max_order, "hermite_eval_all");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
  hermite_eval_all(z, out);
  return out;
}

double hermite_eval(int j, double z) {
  require_order(j, "hermite_eval");
  double prev = 1.0;
  if (j == 0) return prev;
  double cur = 2.0 * z;
  for (int k = 1; k < j; ++k) {
    const double next = 2.0 * z * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  require_finite(cur, "hermite_eval", j, z);
  return cur;
}

double hermite_at_zero(int j) {
  require_order(j, "hermite_at_zero");
  if (j % 2 == 1) return 0.0;
  // H_{2k+2}(0) = -2(2k+1) H_{2k}(0)
  double v = 1.0;
  for (int k = 0; 2 * k < j; ++k) v *= -2.0 * (2 * k + 1);
  require_finite(v, "hermite_at_zero", j, 0.0);
  return v;
}

// W_j(z) = (-1)^j (2j)!/j! L_j(z^2); the Laguerre recurrence is stable where
// the monomial form cancels catastrophically.
void w_poly_eval_all(double z, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  const double x = z * z;
  double lag_prev = 1.0;
  double lag = 1.0 - x;
  double scale = 1.0;
  out[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    if (j > 1) {
      const double k = static_cast<double>(j - 1);
      const double next = ((2.0 * k + 1.0 - x) * lag - k * lag_prev) / (k + 1.0);
      lag_prev = lag;
      lag = next;
    }
    scale *= -2.0 * (2.0 * static_cast<double>(j) - 1.0);
    out[j] = scale * lag;
  }
  require_finite(out[n - 1], "w_poly_eval", static_cast<int>(n - 1), z);
}

std::vector<double> w_poly_eval_all(int max_order, double z) {
  require_order(max_order, "w_poly_eval_all");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
  w_poly_eval_all(z, out);
  return out;
}

double w_poly_eval(int j, double z) {
  require_order(j, "w_poly_eval");
  return w_poly_eval_all(j, z).back();
}

std::vector<double> w_poly_coefficients(int j) {
  require_order(j, "w_poly_coefficients");
  std::vector<double> coeff(static_cast<std::size_t>(j) + 1);
  // k = j term: (2j)!/(j!)^2, then c_{k-1}/c_k = -k^2/(j-k+1).
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c *= static_cast<double>(j + i) / i;
  coeff[static_cast<std::size_t>(j)] = c;
  for (int k = j; k > 0; --k) {
    c *= -static_cast<double>(k) * k / static_cast<double>(j - k + 1);
    coeff[static_cast<std::size_t>(k - 1)] = c;
  }
  require_finite(coeff[0], "w_poly_coefficients", j, 0.0);
  return coeff;
}

double bessel_i0(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("bessel_i0: non-finite argument");
  try {
    const double v = boost::math::cyl_bessel_i(0, x);
    require_finite(v, "bessel_i0", 0, x);
    return v;
  } catch (const std::overflow_error&) {
    std::ostringstream msg;
    msg << "bessel_i0: I0(" << x << ") overflows; use bessel_i0_scaled";
    throw OutOfRange(msg.str());
  }
}

double bessel_i0_scaled(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("bessel_i0_scaled: non-finite argument");
  const double ax = std::fabs(x);
  if (ax <= 700.0) return boost::math::cyl_bessel_i(0, ax) * std::exp(-ax);
  // e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k [(2k-1)!!]^2 / (k! (8x)^k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * ax);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * ax);
}

double bessel_j0(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("bessel_j0: non-finite argument");
  return boost::math::cyl_bessel_j(0, std::fabs(x));
}

double gamma_half(int j) {
  require_order(j, "gamma_half");
  double v = std::sqrt(std::numbers::pi);
  for (int k = 0; k < j; ++k) v *= (k + 0.5);
  require_finite(v, "gamma_half", j, 0.0);
  return v;
}

double poisson_kernel(double x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("poisson_kernel: t must be > 0");
  return std::exp(-x * x / (4.0 * t)) / (2.0 * std::sqrt(std::numbers::pi * t));
}

double scaled_polar_kernel(double r, double xi, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("scaled_polar_kernel: t must be > 0");
  if (r < 0.0 || xi < 0.0) throw std::invalid_argument("scaled_polar_kernel: radii must be >= 0");
  const double d = r - xi;
  const double b = r * xi / (2.0 * t);
  return std::exp(-d * d / (4.0 * t)) * bessel_i0_scaled(b) / (2.0 * t);
}

}  // namespace heatseries
