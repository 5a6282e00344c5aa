#pragma once

/// Special functions consumed by the heat-series formulas: physicists'
/// Hermite polynomials H_j, the radial W-polynomials W_j defined by
///
///     exp(-t^2) I0(2 t z) = sum_j t^(2j) W_j(z) / (2j)!,
///
/// the Bessel functions I0 / J0, half-integer Gamma values and the two heat
/// kernels (Poisson on the line, Weber in the radial plane).
///
/// Every function here is pure. Overflow is reported with
/// `heatseries::OutOfRange` instead of letting inf propagate.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatseries {

class OutOfRange : public std::overflow_error {
 public:
  explicit OutOfRange(const std::string& what) : std::overflow_error(what) {}
};

/// Time parameters of a shifted series: tau is the evolution time, beta the
/// positive shift. tau == 0 is allowed (self-expansion limit).
struct KernelParams {
  double tau = 0.0;
  double beta = 0.0;

  double shifted() const { return tau + beta; }
  void validate() const;
};

enum class PolynomialKind { Hermite, W };

/// A family of polynomials up to a fixed order, evaluated in one pass.
struct PolynomialFamily {
  PolynomialKind kind = PolynomialKind::Hermite;
  int max_order = 0;

  /// Values P_0(z) .. P_max_order(z).
  std::vector<double> evaluate(double z) const;
  void evaluate_into(double z, std::span<double> out) const;
};

// ---- Hermite -------------------------------------------------------------

double hermite_eval(int j, double z);

/// Fills out[0..out.size()) with H_0(z) .. H_{n-1}(z) by forward recurrence.
void hermite_eval_all(double z, std::span<double> out);
std::vector<double> hermite_eval_all(int max_order, double z);

/// H_j(0): zero for odd j, (-1)^k (2k)!/k! for j = 2k.
double hermite_at_zero(int j);

// ---- W polynomials -------------------------------------------------------

double w_poly_eval(int j, double z);

/// Fills out with W_0(z) .. W_{n-1}(z).
void w_poly_eval_all(double z, std::span<double> out);
std::vector<double> w_poly_eval_all(int max_order, double z);

/// Monomial coefficients of W_j in powers of z^2:
/// W_j(z) = sum_k coeff[k] z^(2k), coeff[k] = (2j)! (-1)^(j-k) / (k!^2 (j-k)!).
std::vector<double> w_poly_coefficients(int j);

// ---- Bessel / Gamma ------------------------------------------------------

double bessel_i0(double x);

/// exp(-|x|) I0(x); finite for every finite x.
double bessel_i0_scaled(double x);

double bessel_j0(double x);

/// Gamma(j + 1/2) = (2j)! sqrt(pi) / (4^j j!).
double gamma_half(int j);

// ---- heat kernels --------------------------------------------------------

/// exp(-x^2/(4t)) / (2 sqrt(pi t)).
double poisson_kernel(double x, double t);

/// exp(-(r^2+xi^2)/(4t)) I0(r xi/(2t)) / (2t), evaluated as
/// exp(-(r-xi)^2/(4t)) * [exp(-b) I0(b)] / (2t) with b = r xi / (2t).
double scaled_polar_kernel(double r, double xi, double t);

}  // namespace heatseries
