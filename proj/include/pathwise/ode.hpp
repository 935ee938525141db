#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "pathwise/error.hpp"

namespace pathwise::ode {

template <std::size_t D>
using State = std::array<double, D>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  std::size_t max_steps = 200000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

template <std::size_t D>
State<D> axpy(const State<D>& y, double h, std::initializer_list<std::pair<double, const State<D>*>> terms) {
  State<D> out = y;
  for (const auto& [coef, k] : terms) {
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < D; ++i) out[i] += h * coef * (*k)[i];
  }
  return out;
}

template <std::size_t D>
double error_norm(const State<D>& err, const State<D>& y0, const State<D>& y1, const Options& opt) {
  double worst = 0.0;
  for (std::size_t i = 0; i < D; ++i) {
    const double scale = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double ratio = std::abs(err[i]) / scale;
    if (!std::isfinite(ratio) || !std::isfinite(y1[i])) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, ratio);
  }
  return worst;
}

template <std::size_t D>
double max_abs(const State<D>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// Dormand-Prince 5(4) with FSAL and max-norm step control. Integrates
/// y' = rhs(t, y) from t0 to t1 (either direction) and returns y(t1).
template <std::size_t D, class Rhs>
State<D> integrate(Rhs&& rhs, double t0, State<D> y, double t1, const Options& opt = {}, Stats* stats = nullptr) {
  if (t1 == t0) return y;
  const double direction = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = t0;
  State<D> k1 = rhs(t, y);

  // Starting step from the size of y and y' (Hairer, Norsett & Wanner II.4).
  double h;
  {
    const double d0 = detail::max_abs(y);
    const double d1 = detail::max_abs(k1);
    const double scale = opt.atol + opt.rtol * d0;
    h = (d0 < 1e-5 * scale || d1 < 1e-5 * scale) ? 1e-6 : 0.01 * (scale + d0) / d1;
    h = std::min({h, span, 0.1});
    h = std::max(h, 1e-8 * span);
  }

  Stats local;
  const double h_min = 1e-14 * std::max(1.0, std::abs(t0) + span);
  while (direction * (t1 - t) > 0.0) {
    if (local.accepted + local.rejected >= opt.max_steps) {
      throw NumericalError("ODE integration exceeded " + std::to_string(opt.max_steps) + " steps");
    }
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = direction * h;
    const State<D> k2 = rhs(t + c2 * hs, detail::axpy<D>(y, hs, {{a21, &k1}}));
    const State<D> k3 = rhs(t + c3 * hs, detail::axpy<D>(y, hs, {{a31, &k1}, {a32, &k2}}));
    const State<D> k4 = rhs(t + c4 * hs, detail::axpy<D>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State<D> k5 =
        rhs(t + c5 * hs, detail::axpy<D>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State<D> k6 =
        rhs(t + hs, detail::axpy<D>(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State<D> y_new =
        detail::axpy<D>(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const double t_new = last ? t1 : t + hs;
    const State<D> k7 = rhs(t_new, y_new);

    State<D> err{};
    for (std::size_t i = 0; i < D; ++i) {
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double norm = detail::error_norm<D>(err, y, y_new, opt);

    if (norm <= 1.0) {
      t = t_new;
      y = y_new;
      k1 = k7;
      ++local.accepted;
      const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      if (last) break;
      h *= factor;
    } else {
      ++local.rejected;
      h *= std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 1.0);
      if (h < h_min) throw NumericalError("ODE step size underflow at t = " + std::to_string(t));
    }
  }
  if (stats) *stats = local;
  return y;
}

}  // namespace pathwise::ode
