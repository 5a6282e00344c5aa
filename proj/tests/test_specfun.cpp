#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "heatseries/specfun.hpp"

using namespace heatseries;

namespace {

// Defining series of I0, summed until the terms stop mattering.
double i0_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= (x / 2) * (x / 2) / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double j0_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -(x / 2) * (x / 2) / (static_cast<double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-18) break;
  }
  return sum;
}

}  // namespace

TEST(Hermite, LowOrders) {
  EXPECT_EQ(hermite_eval(0, 0.7), 1.0);
  EXPECT_DOUBLE_EQ(hermite_eval(1, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(hermite_eval(3, 1.0), -4.0);
  // 16 z^4 - 48 z^2 + 12
  const double z = 0.3;
  EXPECT_NEAR(hermite_eval(4, z), 16 * std::pow(z, 4) - 48 * z * z + 12, 1e-13);
}

TEST(Hermite, ValuesAtZero) {
  EXPECT_EQ(hermite_at_zero(1), 0.0);
  EXPECT_DOUBLE_EQ(hermite_at_zero(2), -2.0);
  EXPECT_DOUBLE_EQ(hermite_at_zero(4), 12.0);
  for (int k = 0; k <= 15; ++k) {
    const double ref = hermite_eval(2 * k, 0.0);
    EXPECT_NEAR(hermite_at_zero(2 * k), ref, 4 * std::numeric_limits<double>::epsilon() * std::fabs(ref)) << k;
    EXPECT_EQ(hermite_eval(2 * k + 1, 0.0), 0.0) << k;
  }
}

TEST(Hermite, BatchMatchesSingle) {
  const auto all = hermite_eval_all(25, -1.3);
  ASSERT_EQ(all.size(), 26u);
  for (int j = 0; j <= 25; ++j) EXPECT_DOUBLE_EQ(all[j], hermite_eval(j, -1.3));
  PolynomialFamily fam{PolynomialKind::Hermite, 25};
  EXPECT_EQ(fam.evaluate(-1.3), all);
}

TEST(Hermite, GeneratingFunction) {
  for (double t = -1.0; t <= 1.0 + 1e-12; t += 0.125) {
    for (double z = -2.0; z <= 2.0 + 1e-12; z += 0.25) {
      const auto h = hermite_eval_all(40, z);
      double sum = 0.0, tj = 1.0;
      for (int j = 0; j <= 40; ++j) {
        sum += h[j] * tj;
        tj *= t / (j + 1);
      }
      EXPECT_NEAR(sum, std::exp(2 * t * z - t * t), 1e-10) << "t=" << t << " z=" << z;
    }
  }
}

TEST(WPoly, LowOrders) {
  EXPECT_EQ(w_poly_eval(0, 3.2), 1.0);
  EXPECT_NEAR(w_poly_eval(1, 1.0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(w_poly_eval(2, 0.0), 12.0);
  // 12 - 24 z^2 + 6 z^4
  EXPECT_NEAR(w_poly_eval(2, 0.7), 12 - 24 * 0.49 + 6 * 0.49 * 0.49, 1e-13);
}

TEST(WPoly, CoefficientsAgreeWithEvaluation) {
  for (int j = 0; j <= 12; ++j) {
    const auto c = w_poly_coefficients(j);
    ASSERT_EQ(c.size(), static_cast<std::size_t>(j) + 1);
    for (double z : {0.0, 0.4, 1.1}) {
      double sum = 0.0, zz = 1.0;
      for (double ck : c) {
        sum += ck * zz;
        zz *= z * z;
      }
      EXPECT_NEAR(w_poly_eval(j, z), sum, 1e-11 * std::max(1.0, std::fabs(sum))) << j << " " << z;
    }
  }
}

TEST(WPoly, EvenInZ) {
  for (int j = 0; j <= 20; ++j) {
    for (double z : {0.3, 1.0, 2.5}) EXPECT_EQ(w_poly_eval(j, -z), w_poly_eval(j, z));
  }
}

TEST(WPoly, GeneratingFunction) {
  for (double t = -1.0; t <= 1.0 + 1e-12; t += 0.125) {
    for (double z = 0.0; z <= 2.0 + 1e-12; z += 0.25) {
      const auto w = w_poly_eval_all(30, z);
      double sum = 0.0, t2j = 1.0;
      for (int j = 0; j <= 30; ++j) {
        sum += w[j] * t2j;
        t2j *= t * t / ((2.0 * j + 1) * (2.0 * j + 2));
      }
      EXPECT_NEAR(sum, std::exp(-t * t) * i0_series(2 * t * z), 1e-10) << "t=" << t << " z=" << z;
    }
  }
}

// B = d^2/dz^2 + (1/z) d/dz by central differences.
double bessel_op(double (*f)(double, double), double p, double z, double h) {
  const double fm = f(p, z - h), f0 = f(p, z), fp = f(p, z + h);
  return (fp - 2 * f0 + fm) / (h * h) + (fp - fm) / (2 * h * z);
}

TEST(BesselOperator, I0IsEigenfunction) {
  auto g = [](double t, double z) { return bessel_i0(2 * t * z); };
  for (double t : {0.25, 0.5, 1.0}) {
    for (double z : {0.3, 0.8, 1.5}) {
      const double exact = 4 * t * t * bessel_i0(2 * t * z);
      const double e1 = std::fabs(bessel_op(+g, t, z, 1e-2) - exact);
      const double e2 = std::fabs(bessel_op(+g, t, z, 5e-3) - exact);
      EXPECT_LT(e1, 1e-3 * exact);
      // second order: halving h quarters the error
      EXPECT_NEAR(e1 / e2, 4.0, 0.2) << t << " " << z;
    }
  }
}

TEST(BesselOperator, LowersWOrder) {
  // Generating function: B W_j = 4 (2j)(2j-1) W_{j-1}.
  auto w = [](double j, double z) { return w_poly_eval(static_cast<int>(j), z); };
  for (int j = 1; j <= 10; ++j) {
    for (double z : {0.5, 1.0, 1.7}) {
      const double exact = 4.0 * (2 * j) * (2 * j - 1) * w_poly_eval(j - 1, z);
      const double h = 1e-3;
      const double err = std::fabs(bessel_op(+w, j, z, h) - exact);
      EXPECT_LT(err, 1e-6 * std::max(1.0, std::fabs(exact)) * std::pow(2.0 * j, 4)) << j << " " << z;
    }
  }
}

TEST(Bessel, KnownValues) {
  EXPECT_EQ(bessel_i0(0.0), 1.0);
  EXPECT_EQ(bessel_j0(0.0), 1.0);
  EXPECT_NEAR(bessel_i0(1.0), 1.2660658777520084, 1e-15);
  EXPECT_NEAR(bessel_i0(1.0), i0_series(1.0), 1e-14);
  for (double x : {0.1, 2.0, 7.5, 20.0}) {
    EXPECT_NEAR(bessel_i0(x), i0_series(x), 1e-13 * i0_series(x)) << x;
    EXPECT_NEAR(bessel_i0_scaled(x), std::exp(-x) * i0_series(x), 1e-13) << x;
    if (x < 15) EXPECT_NEAR(bessel_j0(x), j0_series(x), 1e-12) << x;
  }
}

TEST(Bessel, ScaledStaysFiniteForHugeArguments) {
  for (double x : {700.0, 701.0, 5e3, 1e6}) {
    const double v = bessel_i0_scaled(x);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v * std::sqrt(2 * std::numbers::pi * x), 1.0, 1.0 / x);
  }
  // asymptotic branch against the unscaled function while it is still finite
  for (double x : {700.001, 702.5, 705.0}) {
    EXPECT_NEAR(bessel_i0_scaled(x) / (std::exp(-x) * std::cyl_bessel_i(0.0, x)), 1.0, 1e-13) << x;
  }
}

TEST(GammaHalf, Values) {
  const double sp = std::sqrt(std::numbers::pi);
  EXPECT_DOUBLE_EQ(gamma_half(0), sp);
  EXPECT_DOUBLE_EQ(gamma_half(1), sp / 2);
  EXPECT_DOUBLE_EQ(gamma_half(2), 3 * sp / 4);
  for (int j = 0; j <= 60; ++j) EXPECT_NEAR(gamma_half(j) / std::tgamma(j + 0.5), 1.0, 1e-13) << j;
}

TEST(Kernels, PolarKernelValues) {
  EXPECT_DOUBLE_EQ(scaled_polar_kernel(0, 0, 0.5), 1.0);
  EXPECT_NEAR(scaled_polar_kernel(1, 1, 0.5), std::exp(-1.0) * i0_series(1.0), 1e-15);
  EXPECT_NEAR(scaled_polar_kernel(1, 1, 0.5), 0.4657596075936404, 1e-15);
  // far apart large arguments: no overflow, no spurious zero
  const double k = scaled_polar_kernel(400, 401, 2.0);
  EXPECT_TRUE(std::isfinite(k));
  EXPECT_GT(k, 0.0);
}

TEST(Kernels, PoissonKernel) {
  EXPECT_NEAR(poisson_kernel(0, 1), 1 / (2 * std::sqrt(std::numbers::pi)), 1e-16);
  EXPECT_NEAR(poisson_kernel(2, 0.5), std::exp(-2.0) / (2 * std::sqrt(std::numbers::pi * 0.5)), 1e-16);
}

TEST(KernelParams, Validation) {
  EXPECT_NO_THROW((KernelParams{0.0, 0.5}.validate()));
  EXPECT_THROW((KernelParams{-0.1, 0.5}.validate()), std::invalid_argument);
  EXPECT_THROW((KernelParams{0.3, 0.0}.validate()), std::invalid_argument);
  EXPECT_DOUBLE_EQ((KernelParams{0.3, 0.7}.shifted()), 1.0);
}

TEST(Overflow, SurfacedNotPropagated) {
  EXPECT_THROW(hermite_eval(400, 30.0), OutOfRange);
}
