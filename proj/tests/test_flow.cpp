#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pathwise/flow.hpp"
#include "pathwise/ode.hpp"

using namespace pathwise;

TEST(Ode, ExponentialGrowthBothDirections) {
  auto rhs = [](double, const ode::State<1>& y) { return ode::State<1>{0.7 * y[0]}; };
  EXPECT_NEAR(ode::integrate<1>(rhs, 0.0, {2.0}, 1.5)[0], 2.0 * std::exp(1.05), 1e-9);
  EXPECT_NEAR(ode::integrate<1>(rhs, 0.0, {2.0}, -1.5)[0], 2.0 * std::exp(-1.05), 1e-9);
  EXPECT_EQ(ode::integrate<1>(rhs, 0.3, {2.0}, 0.3)[0], 2.0);
}

TEST(Ode, HarmonicOscillator) {
  auto rhs = [](double, const ode::State<2>& y) { return ode::State<2>{y[1], -y[0]}; };
  ode::Stats stats;
  const auto y = ode::integrate<2>(rhs, 0.0, {1.0, 0.0}, 10.0, {}, &stats);
  EXPECT_NEAR(y[0], std::cos(10.0), 1e-8);
  EXPECT_NEAR(y[1], -std::sin(10.0), 1e-8);
  EXPECT_GT(stats.accepted, 0u);
}

TEST(Ode, BlowUpIsReported) {
  auto rhs = [](double, const ode::State<1>& y) { return ode::State<1>{y[0] * y[0]}; };
  EXPECT_THROW(ode::integrate<1>(rhs, 0.0, {1.0}, 2.0), NumericalError);
}

TEST(Field, DeclaredPartialsMatchDifferences) {
  for (const auto& f : {VolatilityField::constant(0.4), VolatilityField::sqrt1p(), VolatilityField::black_scholes()}) {
    const auto r = check_field(f);
    EXPECT_TRUE(r.ok) << f.name << " xi=" << r.worst_sigma_xi << " t=" << r.worst_sigma_t;
  }
}

TEST(Field, BrokenDerivativeIsDetected) {
  auto f = VolatilityField::sqrt1p();
  f.sigma_xi = [](double, double) { return 0.5; };
  EXPECT_FALSE(check_field(f).ok);
}

TEST(Flow, ConstantField) {
  const auto f = VolatilityField::constant(1.3);
  for (double xi : {-1.0, 0.0, 2.5}) {
    for (double t : {-0.7, 0.0, 1.0}) {
      EXPECT_NEAR(flow(f, 0.4, xi, t), xi + 1.3 * t, 1e-12);
      const auto p = flow_derivatives(f, 0.4, xi, t);
      EXPECT_NEAR(p.d_xi, 1.0, 1e-12);
      EXPECT_EQ(p.d_tau, 0.0);
      EXPECT_EQ(p.d_tt, 0.0);
    }
  }
}

TEST(Flow, LinearField) {
  const auto f = VolatilityField::black_scholes();
  for (double tau : {0.0, 0.5, 1.0}) {
    const double s = 0.2 + 0.1 * tau;
    for (double xi : {-2.0, 0.5, 3.0}) {
      for (double t : {-1.0, 0.3, 1.0}) {
        const auto p = flow_derivatives(f, tau, xi, t);
        EXPECT_NEAR(p.value, xi * std::exp(s * t), 1e-9);
        EXPECT_NEAR(p.d_xi, std::exp(s * t), 1e-9);
        EXPECT_NEAR(p.d_tau, xi * t * 0.1 * std::exp(s * t), 1e-9);
        EXPECT_NEAR(p.d_tt, s * s * xi * std::exp(s * t), 1e-9);
      }
    }
  }
}

TEST(Flow, SquareRootField) {
  const auto f = VolatilityField::sqrt1p();
  for (double xi : {-2.0, 0.0, 0.7, 1.9}) {
    for (double t : {-1.0, -0.2, 0.5, 1.0}) {
      const double exact = std::sinh(t + std::asinh(xi));
      const auto p = flow_derivatives(f, 0.3, xi, t);
      EXPECT_NEAR(p.value, exact, 1e-9);
      EXPECT_NEAR(p.d_xi, std::cosh(t + std::asinh(xi)) / std::sqrt(1 + xi * xi), 1e-9);
      EXPECT_EQ(p.d_tau, 0.0);
      const double h = 1e-4;
      const double fd = (std::sinh(t + h + std::asinh(xi)) - 2 * exact + std::sinh(t - h + std::asinh(xi))) / (h * h);
      EXPECT_NEAR(p.d_tt, fd, 1e-5);
    }
  }
}

TEST(Flow, DerivativePositiveAndBounded) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& f : {VolatilityField::sqrt1p(), VolatilityField::black_scholes()}) {
    for (int i = 0; i < 40; ++i) {
      const double tau = 0.5 + 0.5 * u(rng), xi = 3 * u(rng), t = u(rng);
      const auto p = flow_derivatives(f, tau, xi, t);
      const auto [lo, hi] = flow_d_xi_bounds(f, t);
      EXPECT_GT(p.d_xi, 0.0);
      EXPECT_GE(p.d_xi, lo * (1 - 1e-9));
      EXPECT_LE(p.d_xi, hi * (1 + 1e-9));
    }
  }
}

TEST(Flow, IdentitySuite) {
  for (const auto& f : {VolatilityField::sqrt1p(), VolatilityField::black_scholes(), VolatilityField::constant(-0.8)}) {
    const auto r = flow_identity_suite(f, 30, 17);
    EXPECT_LE(r.semigroup, 1e-8) << f.name;
    EXPECT_LE(r.time_derivative, 1e-7) << f.name;
    EXPECT_LE(r.second_order, 1e-5) << f.name;
    EXPECT_LE(r.d_xi_fd, 1e-5) << f.name;
    EXPECT_LE(r.d_tau_fd, 1e-5) << f.name;
    EXPECT_TRUE(r.d_xi_within_bounds) << f.name;
  }
}

TEST(Flow, TimeDependentNonlinearField) {
  // sigma = (1 + t) sin(xi) / 2 + 1 has no closed-form flow; check the
  // augmented derivatives against differences of the flow itself.
  VolatilityField f{[](double t, double xi) { return 0.5 * (1 + t) * std::sin(xi) + 1; },
                    [](double, double xi) { return 0.5 * std::sin(xi); },
                    [](double t, double xi) { return 0.5 * (1 + t) * std::cos(xi); }, 0.5, 1.0, "wavy"};
  ASSERT_TRUE(check_field(f).ok);
  const double h = 1e-5;
  for (double tau : {0.1, 0.8}) {
    for (double t : {-0.9, 0.6}) {
      const double xi = 0.4;
      const auto p = flow_derivatives(f, tau, xi, t, {1e-12, 1e-12});
      EXPECT_NEAR(p.d_tau, (flow(f, tau + h, xi, t, {1e-12, 1e-12}) - flow(f, tau - h, xi, t, {1e-12, 1e-12})) / (2 * h), 1e-6);
      EXPECT_NEAR(p.d_xi, (flow(f, tau, xi + h, t, {1e-12, 1e-12}) - flow(f, tau, xi - h, t, {1e-12, 1e-12})) / (2 * h), 1e-6);
    }
  }
}
