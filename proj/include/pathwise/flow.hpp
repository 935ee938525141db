#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "pathwise/error.hpp"
#include "pathwise/ode.hpp"

namespace pathwise {

/// Volatility sigma(t, xi) with its first partial derivatives.
///
/// The existence theory wants sigma in C^2 with bounded first derivatives;
/// `sup_sigma_t` / `sup_sigma_xi` record the declared bounds (infinity when a
/// field, like sigma(t) xi, has none in one variable).
struct VolatilityField {
  using Fn = std::function<double(double, double)>;

  Fn sigma;
  Fn sigma_t;
  Fn sigma_xi;
  double sup_sigma_t = std::numeric_limits<double>::infinity();
  double sup_sigma_xi = std::numeric_limits<double>::infinity();
  std::string name;

  double operator()(double t, double xi) const { return sigma(t, xi); }

  /// sigma = c.
  static VolatilityField constant(double c) {
    return {[c](double, double) { return c; }, [](double, double) { return 0.0; },
            [](double, double) { return 0.0; }, 0.0, 0.0, "constant"};
  }

  /// sigma(t, xi) = s(t) xi.
  static VolatilityField linear(std::function<double(double)> s, std::function<double(double)> ds) {
    return {[s](double t, double xi) { return s(t) * xi; }, [ds](double t, double xi) { return ds(t) * xi; },
            [s](double t, double) { return s(t); }, std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), "linear"};
  }

  /// sigma(xi) = sqrt(1 + xi^2); flow sinh(t + asinh xi).
  static VolatilityField sqrt1p() {
    return {[](double, double xi) { return std::sqrt(1.0 + xi * xi); }, [](double, double) { return 0.0; },
            [](double, double xi) { return xi / std::sqrt(1.0 + xi * xi); }, 0.0, 1.0, "sqrt1p"};
  }

  /// The time-inhomogeneous Black-Scholes field (0.2 + 0.1 t) xi.
  static VolatilityField black_scholes() {
    auto f = linear([](double t) { return 0.2 + 0.1 * t; }, [](double) { return 0.1; });
    f.name = "bs";
    f.sup_sigma_xi = 0.3;
    return f;
  }
};

struct FieldCheck {
  double worst_sigma_xi = 0.0;  // max |central difference - sigma_xi| / (1 + |sigma_xi|)
  double worst_sigma_t = 0.0;
  bool bounds_respected = true;
  bool ok = true;
};

/// Finite-difference consistency of the declared partials and bounds on a
/// tau in [0, 1], xi in [-xi_max, xi_max] lattice.
inline FieldCheck check_field(const VolatilityField& f, double xi_max = 5.0, int samples = 21, double h = 1e-5,
                              double tol = 1e-4) {
  FieldCheck r;
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      const double xi = -xi_max + 2.0 * xi_max * j / (samples - 1);
      const double dxi = f.sigma_xi(t, xi);
      const double dt = f.sigma_t(t, xi);
      const double fd_xi = (f.sigma(t, xi + h) - f.sigma(t, xi - h)) / (2 * h);
      const double fd_t = (f.sigma(t + h, xi) - f.sigma(t - h, xi)) / (2 * h);
      r.worst_sigma_xi = std::max(r.worst_sigma_xi, std::abs(fd_xi - dxi) / (1 + std::abs(dxi)));
      r.worst_sigma_t = std::max(r.worst_sigma_t, std::abs(fd_t - dt) / (1 + std::abs(dt)));
      if (std::abs(dxi) > f.sup_sigma_xi * (1 + 1e-12) || std::abs(dt) > f.sup_sigma_t * (1 + 1e-12)) {
        r.bounds_respected = false;
      }
    }
  }
  r.ok = r.worst_sigma_xi <= tol && r.worst_sigma_t <= tol && r.bounds_respected;
  return r;
}

/// phi and its partial derivatives at one (tau, xi, t).
struct FlowPoint {
  double value = 0.0;
  double d_xi = 1.0;
  double d_tau = 0.0;
  double d_tt = 0.0;
};

struct FlowOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
};

/// phi(tau, xi, t): solution at time t of u' = sigma(tau, u), u(0) = xi.
/// Negative t integrates backwards.
inline double flow(const VolatilityField& f, double tau, double xi, double t, const FlowOptions& opt = {}) {
  const ode::Options o{opt.rtol, opt.atol};
  auto rhs = [&](double, const ode::State<1>& u) { return ode::State<1>{f.sigma(tau, u[0])}; };
  return ode::integrate<1>(rhs, 0.0, {xi}, t, o)[0];
}

/// phi with phi_xi and phi_tau co-integrated as one system
///   u' = sigma(u),  v' = sigma_xi(u) v,  w' = sigma_tau(u) + sigma_xi(u) w,
/// and phi_tt = sigma_xi(phi) sigma(phi) by composition.
inline FlowPoint flow_derivatives(const VolatilityField& f, double tau, double xi, double t,
                                  const FlowOptions& opt = {}) {
  const ode::Options o{opt.rtol, opt.atol};
  auto rhs = [&](double, const ode::State<3>& y) {
    const double s_xi = f.sigma_xi(tau, y[0]);
    return ode::State<3>{f.sigma(tau, y[0]), s_xi * y[1], f.sigma_t(tau, y[0]) + s_xi * y[2]};
  };
  const auto y = ode::integrate<3>(rhs, 0.0, {xi, 1.0, 0.0}, t, o);
  FlowPoint p;
  p.value = y[0];
  p.d_xi = y[1];
  p.d_tau = y[2];
  p.d_tt = f.sigma_xi(tau, y[0]) * f.sigma(tau, y[0]);
  return p;
}

/// Bounds e^{-L|t|} <= phi_xi <= e^{L|t|} from phi_xi = exp(int sigma_xi), L = sup|sigma_xi|.
inline std::pair<double, double> flow_d_xi_bounds(const VolatilityField& f, double t) {
  const double l = f.sup_sigma_xi * std::abs(t);
  return {std::exp(-l), std::exp(l)};
}

/// Worst violations of the flow identities over random points
/// tau in [0, 1], xi in [-2, 2], s, t in [-1, 1].
struct FlowIdentityReport {
  double semigroup = 0.0;        // |phi(phi(xi, s), t) - phi(xi, s + t)|
  double time_derivative = 0.0;  // |phi_t(xi, -t) - phi_xi(xi, -t) sigma(xi)|
  double second_order = 0.0;     // second-order identity, derivatives by differences
  double d_xi_fd = 0.0;          // |phi_xi - central difference| / (1 + |phi_xi|)
  double d_tau_fd = 0.0;
  double d_xi_min = std::numeric_limits<double>::infinity();
  bool d_xi_within_bounds = true;
  int samples = 0;
};

inline FlowIdentityReport flow_identity_suite(const VolatilityField& f, int samples = 50, std::uint64_t seed = 1,
                                              const FlowOptions& opt = {1e-12, 1e-12}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FlowIdentityReport r;
  r.samples = samples;
  const double h = 1e-4;
  for (int i = 0; i < samples; ++i) {
    const double tau = unit(rng);
    const double xi = -2.0 + 4.0 * unit(rng);
    const double s = -1.0 + 2.0 * unit(rng);
    const double t = -1.0 + 2.0 * unit(rng);

    const double inner = flow(f, tau, xi, s, opt);
    r.semigroup = std::max(r.semigroup, std::abs(flow(f, tau, inner, t, opt) - flow(f, tau, xi, s + t, opt)));

    const FlowPoint back = flow_derivatives(f, tau, xi, -t, opt);
    const double phi_t = f.sigma(tau, back.value);
    r.time_derivative = std::max(r.time_derivative, std::abs(phi_t - back.d_xi * f.sigma(tau, xi)));

    // phi_xi_xi and phi_xi_t by central differences of phi_xi, phi_tt of phi_t.
    const double sg = f.sigma(tau, xi);
    const double d_xi_xi = (flow_derivatives(f, tau, xi + h, -t, opt).d_xi -
                            flow_derivatives(f, tau, xi - h, -t, opt).d_xi) / (2 * h);
    const double d_xi_t = (flow_derivatives(f, tau, xi, -t + h, opt).d_xi -
                           flow_derivatives(f, tau, xi, -t - h, opt).d_xi) / (2 * h);
    const double d_tt = (f.sigma(tau, flow(f, tau, xi, -t + h, opt)) - f.sigma(tau, flow(f, tau, xi, -t - h, opt))) /
                        (2 * h);
    const double lhs = d_xi_xi * sg * sg - 2.0 * d_xi_t * sg + d_tt;
    const double rhs = -back.d_xi * f.sigma_xi(tau, xi) * sg;  // phi_tt(phi(xi, -t), t) = sigma_xi sigma at xi
    r.second_order = std::max(r.second_order, std::abs(lhs - rhs));

    const FlowPoint p = flow_derivatives(f, tau, xi, t, opt);
    const double fd_xi = (flow(f, tau, xi + h, t, opt) - flow(f, tau, xi - h, t, opt)) / (2 * h);
    const double fd_tau = (flow(f, tau + h, xi, t, opt) - flow(f, tau - h, xi, t, opt)) / (2 * h);
    r.d_xi_fd = std::max(r.d_xi_fd, std::abs(p.d_xi - fd_xi) / (1 + std::abs(p.d_xi)));
    r.d_tau_fd = std::max(r.d_tau_fd, std::abs(p.d_tau - fd_tau) / (1 + std::abs(p.d_tau)));
    r.d_xi_min = std::min(r.d_xi_min, p.d_xi);
    const auto [lo, hi] = flow_d_xi_bounds(f, t);
    if (!(p.d_xi >= lo * (1 - 1e-9) && p.d_xi <= hi * (1 + 1e-9))) r.d_xi_within_bounds = false;
  }
  return r;
}

}  // namespace pathwise
