#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <string_view>

#include "pathwise/dyadic.hpp"
#include "pathwise/quadvar.hpp"

namespace pathwise {

/// Non-anticipative Riemann sum sum_{s in T_n, s < t} eta(s)(x(s') - x(s)).
///
/// eta is the sampled trace of an admissible integrand, e.g. g(A(t), x(t))
/// with g continuously differentiable; admissibility is not checked.
inline double follmer_integral(const SampledPath& eta, const SampledPath& x, int n, double t) {
  SampledPath::require_same_level(eta, x);
  const std::size_t stride = detail::level_stride(x, n);
  const std::size_t j = DyadicGrid(n).index_of(t);
  return detail::left_point_sum(eta.values(), x.values(), stride, j);
}

/// Trace t -> g(t, x(t)) of an integrand of the form g(A(t), x(t)) with A(t) = t.
template <class G>
SampledPath integrand_trace(const SampledPath& x, G&& g) {
  const DyadicGrid grid = x.grid();
  std::vector<double> v(x.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = g(grid.point(k), x[k]);
  return SampledPath(x.level(), std::move(v));
}

/// A C^2 scalar map with its first two derivatives.
struct ScalarMap {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;

  static ScalarMap square() {
    return {[](double v) { return v * v; }, [](double v) { return 2 * v; }, [](double) { return 2.0; }};
  }
  static ScalarMap cube() {
    return {[](double v) { return v * v * v; }, [](double v) { return 3 * v * v; }, [](double v) { return 6 * v; }};
  }
  static ScalarMap exponential() {
    auto e = [](double v) { return std::exp(v); };
    return {e, e, e};
  }
  static ScalarMap linear(double a, double b) {
    return {[a, b](double v) { return a + b * v; }, [b](double) { return b; }, [](double) { return 0.0; }};
  }
};

/// Level-n defect of the pathwise Ito formula:
/// F(x(t)) - F(x(0)) - sum F'(x(s)) dx - 1/2 sum F''(x(s)) dx^2, sums over s < t.
inline double ito_residual(const ScalarMap& F, const SampledPath& x, int n, double t) {
  const std::size_t stride = detail::level_stride(x, n);
  const std::size_t j = DyadicGrid(n).index_of(t);
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < j; ++i) {
    const double a = x[i * stride];
    const double dx = x[(i + 1) * stride] - a;
    s.add(F.d1(a) * dx + 0.5 * F.d2(a) * dx * dx);
  }
  return (F.f(x[j * stride]) - F.f(x[0])) - s.value();
}

}  // namespace pathwise
