#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "heatseries/kernels.hpp"

using namespace heatseries;

TEST(ForwardLine, GaussianValues) {
  const auto f = AnalyticProfile::gaussian(1.0);
  for (auto m : {ForwardMethod::ClosedForm, ForwardMethod::Quadrature}) {
    EXPECT_NEAR(forward_line(f, 1.0, 0.0, {}, m), std::sqrt(0.5), 1e-10);
    EXPECT_NEAR(forward_line(f, 0.5, 1.0, {}, m), std::sqrt(2.0 / 3) * std::exp(-1.0 / 6), 1e-10);
    EXPECT_NEAR(forward_line(f, 0.5, 1.0, {}, m), 0.69114943419099040, 1e-10);
  }
  EXPECT_NEAR(forward_line(f, 1e-10, 1.0), std::exp(-0.25), 1e-9);
}

TEST(ForwardLine, PreconditionsAndClosedFormAvailability) {
  const auto f = AnalyticProfile::gaussian(1.0);
  EXPECT_THROW(forward_line(f, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(forward_line(AnalyticProfile(Bump{}), 0.5, 0.0, {}, ForwardMethod::ClosedForm), std::invalid_argument);
  EXPECT_THROW(forward_line(AnalyticProfile::gaussian(1.0, 1.0, 0.0, Geometry::Polar), 0.5, 0.0),
               std::invalid_argument);
}

TEST(ForwardLine, SampledDataIsZeroExtended) {
  // the indicator of [-1, 1] sampled exactly: u(tau, 0) = erf(1 / (2 sqrt(tau)))
  const Sampled1D box({-1.0, 1.0}, std::vector<double>(201, 1.0));
  EXPECT_NEAR(forward_line(box, 0.25, 0.0), std::erf(1.0), 1e-9);
}

TEST(ForwardLine, TinyTimeApproachesData) {
  const AnalyticProfile b(Bump{0.0, 1.0, 1.0});
  EXPECT_NEAR(forward_line(b, 1e-6, 0.3), b(0.3), 1e-4);
}

TEST(ForwardPolar, GaussianValues) {
  const auto f1 = AnalyticProfile::gaussian(1.0, 1.0, 0.0, Geometry::Polar);
  const auto f2 = AnalyticProfile::gaussian(2.0, 1.0, 0.0, Geometry::Polar);
  for (auto m : {ForwardMethod::ClosedForm, ForwardMethod::Quadrature}) {
    EXPECT_NEAR(forward_polar(f1, 1.0, 0.0, {}, m), 0.5, 1e-10);
    EXPECT_NEAR(forward_polar(f2, 1.0, 2.0, {}, m), 2.0 / 3 * std::exp(-1.0 / 3), 1e-10);
    EXPECT_NEAR(forward_polar(f2, 1.0, 2.0, {}, m), 0.47768754038252617, 1e-10);
  }
  const AnalyticProfile b(Bump{0.0, 1.5, 1.0}, Geometry::Polar);
  EXPECT_NEAR(forward_polar(b, 1e-6, 0.7), b(0.7), 1e-4);
}

TEST(Weber, IdentityOnGrid) {
  EXPECT_NEAR(weber_integral_check(0, 0, 1).lhs, 0.5, 1e-10);
  EXPECT_NEAR(weber_integral_check(0, 0, 1).rhs, 0.5, 1e-15);
  const auto c = weber_integral_check(1, 0, 1);
  EXPECT_NEAR(c.lhs, 0.38940039153570243, 1e-8);
  EXPECT_NEAR(c.rhs, 0.38940039153570243, 1e-15);
  EXPECT_NEAR(weber_integral_check(1, 2, 0.7).rhs, 0.18912680779954904, 1e-15);
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    for (double xi : {0.0, 0.5, 1.0, 2.0}) {
      for (double t : {0.25, 0.5, 1.0, 2.0}) {
        const auto w = weber_integral_check(r, xi, t);
        EXPECT_NEAR(w.lhs, w.rhs, 1e-8) << r << " " << xi << " " << t;
      }
    }
  }
}

TEST(J0Product, IdentityOnGrid) {
  const auto c = j0_product_check(1, 1, 1);
  EXPECT_NEAR(c.lhs, 0.58552749951366402, 1e-12);
  EXPECT_NEAR(c.rhs, c.lhs, 1e-9);
  EXPECT_NEAR(j0_product_check(2, 0.5, 1.3).lhs, -0.074074927151963153, 1e-12);
  EXPECT_DOUBLE_EQ(j0_product_check(0, 1, 2).lhs, 1.0);
  EXPECT_NEAR(j0_product_check(0, 1, 2).rhs, 1.0, 1e-12);
  const auto y0 = j0_product_check(1.7, 0.9, 0.0);
  EXPECT_NEAR(y0.lhs, y0.rhs, 1e-12);
  for (double lambda : {0.5, 1.0, 3.0}) {
    for (double x : {0.0, 0.5, 1.0, 2.0}) {
      for (double y : {0.0, 0.5, 1.0, 2.0}) {
        const auto p = j0_product_check(lambda, x, y);
        EXPECT_NEAR(p.lhs, p.rhs, 1e-8) << lambda << " " << x << " " << y;
      }
    }
  }
}

TEST(Semigroup, LineAndPolar) {
  const AnalyticProfile f(Mixture{{{1.0, -0.4, 0.7}, {0.6, 0.5, 1.3}}});
  const double t1 = 0.3, t2 = 0.45;
  const auto step = Sampled1D::sample([&](double x) { return forward_line(f, t1, x); }, -15, 15, 3001);
  for (double x : {-1.0, 0.0, 0.8}) {
    // closed form on the exact evolution, quadrature on the tabulated one
    const double direct = forward_line(f, t1 + t2, x);
    EXPECT_NEAR(forward_line(*f.evolved(t1), t2, x, {}, ForwardMethod::Quadrature), direct, 1e-10);
    EXPECT_NEAR(forward_line(step, t2, x), direct, 1e-5);  // linear interpolation, h = 0.01
  }
  const auto g = AnalyticProfile::gaussian(0.8, 1.0, 0.0, Geometry::Polar);
  for (double r : {0.0, 0.6, 1.9}) {
    EXPECT_NEAR(forward_polar(*g.evolved(t1), t2, r, {}, ForwardMethod::Quadrature), forward_polar(g, t1 + t2, r),
                1e-8);
  }
}

TEST(Mass, ConservedOnLine) {
  const AnalyticProfile f(Mixture{{{1.0, -0.4, 0.7}, {0.6, 0.5, 1.3}}});
  const double mass0 = 2 * std::sqrt(std::numbers::pi) * (std::sqrt(0.7) + 0.6 * std::sqrt(1.3));
  for (double tau : {0.1, 0.5, 1.0}) {
    const auto m = integrate([&](double x) { return forward_line(f, tau, x, {}, ForwardMethod::Quadrature); },
                             IntegrandDomain::whole_line(std::sqrt(2 * (1.3 + tau))));
    EXPECT_NEAR(m.value, mass0, 1e-8 * mass0) << tau;
  }
}

TEST(MaximumPrinciple, WeakCheck) {
  const AnalyticProfile b(Bump{0.2, 1.0, 1.0});
  const AnalyticProfile f(Mixture{{{1.0, -0.4, 0.7}, {0.6, 0.5, 1.3}}});
  for (const auto* p : {&b, &f}) {
    double fmax = 0.0, umax = 0.0;
    for (double x = -4; x <= 4; x += 0.05) {
      fmax = std::max(fmax, (*p)(x));
      umax = std::max(umax, forward_line(*p, 0.2, x));
    }
    EXPECT_LE(umax, fmax + 1e-10);
  }
}
