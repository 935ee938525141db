#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pathwise/constructors.hpp"
#include "pathwise/dyadic.hpp"
#include "pathwise/error.hpp"
#include "pathwise/faber_schauder.hpp"
#include "pathwise/flow.hpp"
#include "pathwise/ide.hpp"
#include "pathwise/ode.hpp"

namespace pathwise {

struct ShootStep {
  int iteration = 0;
  double b = 0.0;
  double z_at_t0 = 0.0;
};

struct ShootResult {
  double b = 0.0;
  double z_at_t0 = 0.0;
  double error = 0.0;  // |z_b(t0) - z1|
  std::vector<ShootStep> trace;
};

struct ShootOptions {
  double tolerance = 1e-6;
  double max_abs_b = 1e6;
  int max_iterations = 200;
  SolverOptions solver{};
};

/// dz = sigma(t, z) dx + b dt with <x>_t = t, as an IDEProblem on x's grid.
inline IDEProblem constant_drift_problem(const VolatilityField& field, const SampledPath& x, double z0, double b) {
  return IDEProblem(field, [b](double, double) { return b; }, BVDriver::time(x.level()), x,
                    BVDriver::time(x.level()), z0);
}

/// z_b(t0) for the constant-drift equation, solved on the level-`level` grid.
inline double terminal_value(const VolatilityField& field, const SampledPath& x, double z0, double b, double t0,
                             int level, const SolverOptions& opt = {}) {
  const IDEProblem p = constant_drift_problem(field, x, z0, b);
  const SampledPath B = solve_B(p, Scheme::picard, level, opt);
  const DyadicGrid grid(level);
  const std::size_t j = grid.index_of(t0);
  return flow(field, t0, B[j], restrict(x, level)[j], opt.flow);
}

/// Constant drift b steering z from z0 to z(t0) = z1. Requires <x>_t = t.
///
/// b -> z_b(t0) is continuous and increasing and sweeps all of R, so a bracket
/// found by doubling from [-1, 1] always exists; Illinois regula falsi then
/// closes it.
inline ShootResult shoot_constant_b(const VolatilityField& field, const SampledPath& x, double z0, double z1,
                                    double t0, int level, const ShootOptions& opt = {}) {
  if (!(t0 > 0.0 && t0 <= 1.0)) throw DomainError("shooting time must lie in (0, 1]");
  DyadicGrid(level).index_of(t0);
  ShootResult r;
  int iteration = 0;
  auto residual = [&](double b) {
    const double z = terminal_value(field, x, z0, b, t0, level, opt.solver);
    r.trace.push_back({iteration++, b, z});
    return z - z1;
  };
  auto finish = [&](double b, double f) {
    r.b = b;
    r.z_at_t0 = f + z1;
    r.error = std::abs(f);
    return r;
  };

  double lo = -1.0, hi = 1.0;
  double f_lo = residual(lo);
  if (std::abs(f_lo) <= opt.tolerance) return finish(lo, f_lo);
  double f_hi = residual(hi);
  if (std::abs(f_hi) <= opt.tolerance) return finish(hi, f_hi);
  while (f_lo > 0.0) {
    hi = lo;
    f_hi = f_lo;
    lo *= 2.0;
    if (std::abs(lo) > opt.max_abs_b) throw NumericalError("no shooting bracket with |b| <= " + std::to_string(opt.max_abs_b));
    f_lo = residual(lo);
  }
  while (f_hi < 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    if (std::abs(hi) > opt.max_abs_b) throw NumericalError("no shooting bracket with |b| <= " + std::to_string(opt.max_abs_b));
    f_hi = residual(hi);
  }
  if (std::abs(f_lo) <= opt.tolerance) return finish(lo, f_lo);
  if (std::abs(f_hi) <= opt.tolerance) return finish(hi, f_hi);

  int side = 0;
  for (int k = 0; k < opt.max_iterations; ++k) {
    double b = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(b > lo && b < hi)) b = 0.5 * (lo + hi);
    const double f = residual(b);
    if (std::abs(f) <= opt.tolerance || hi - lo <= 1e-15 * std::max(1.0, std::abs(b))) return finish(b, f);
    if (f > 0.0) {
      hi = b;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    } else {
      lo = b;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    }
  }
  throw NumericalError("shooting did not reach tolerance in " + std::to_string(opt.max_iterations) + " steps");
}

struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
};

/// Comparison bounds for z_b(t0). With phi_xi in [e^{-LX}, e^{LX}] on the
/// path's range X and a declared growth constant |g2 + g3| <= c (1 + |y|),
/// B is trapped between the solutions of y' = b_max + c(1+|y|) and
/// y' = b_min - c(1+|y|); z follows because phi is increasing in xi.
inline Envelope shooting_envelope(const VolatilityField& field, const SampledPath& x, double z0, double b,
                                  double t0, double growth_c, int level) {
  const SampledPath xs = restrict(x, level);
  const std::size_t j0 = DyadicGrid(level).index_of(t0);
  double range = 0.0;
  for (std::size_t j = 0; j <= j0; ++j) range = std::max(range, std::abs(xs[j]));
  const auto [lo_xi, hi_xi] = flow_d_xi_bounds(field, range);
  const double g_min = 1.0 / hi_xi;
  const double g_max = 1.0 / lo_xi;
  const double b_max = std::max(b * g_min, b * g_max);
  const double b_min = std::min(b * g_min, b * g_max);
  auto up = [&](double, const ode::State<1>& y) { return ode::State<1>{b_max + growth_c * (1 + std::abs(y[0]))}; };
  auto down = [&](double, const ode::State<1>& y) { return ode::State<1>{b_min - growth_c * (1 + std::abs(y[0]))}; };
  const double upper_b = ode::integrate<1>(up, 0.0, {z0}, t0)[0];
  const double lower_b = ode::integrate<1>(down, 0.0, {z0}, t0)[0];
  return {flow(field, t0, lower_b, xs[j0]), flow(field, t0, upper_b, xs[j0])};
}

namespace detail {

/// Fourth-order differences; one-sided five-point stencils at both ends.
inline SampledPath differentiate(const SampledPath& f) {
  const std::size_t n = f.size();
  if (n < 5) throw DomainError("differentiation needs a path of level >= 2");
  const double h = f.grid().mesh();
  std::vector<double> d(n);
  d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
  d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
  const std::size_t m = n - 1;
  d[m - 1] = (3 * f[m] + 10 * f[m - 1] - 18 * f[m - 2] + 6 * f[m - 3] - f[m - 4]) / (12 * h);
  d[m] = (25 * f[m] - 48 * f[m - 1] + 36 * f[m - 2] - 16 * f[m - 3] + 3 * f[m - 4]) / (12 * h);
  return SampledPath(f.level(), std::move(d));
}

}  // namespace detail

struct MatchResult {
  SampledPath drift;     // b(t)
  SampledPath target_z;  // phi(t, B(t), x(t))
  SampledPath solved_z;  // solution of dz = sigma dx + b(t) dt, <x>_t = t
  double sup_error = 0.0;
};

/// Drift b(t) = phi_xi B' + phi_tau + phi_tt / 2 at (t, B(t), x(t)) that makes
/// the target B solve the integral equation, followed by a re-solve check.
/// Without `derivative`, B' comes from fourth-order differences of the target.
inline MatchResult match_path(const SampledPath& target_b, const std::optional<SampledPath>& derivative,
                              const VolatilityField& field, const SampledPath& x, int level,
                              const SolverOptions& opt = {}) {
  const SampledPath b_path = restrict(target_b, level);
  const SampledPath db = derivative ? restrict(*derivative, level) : detail::differentiate(b_path);
  const SampledPath xs = restrict(x, level);
  const DyadicGrid grid(level);
  std::vector<double> drift(grid.size());
  std::vector<double> target_z(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = grid.point(j);
    const FlowPoint fp = flow_derivatives(field, t, b_path[j], xs[j], opt.flow);
    drift[j] = fp.d_xi * db[j] + fp.d_tau + 0.5 * fp.d_tt;
    target_z[j] = fp.value;
  }
  SampledPath drift_path(level, std::move(drift));
  const IDEProblem p(field, [drift_path](double t, double) { return drift_path(t); }, BVDriver::time(level), xs,
                     BVDriver::time(level), b_path[0]);
  IDESolution sol = solve_ide(p, level, opt);
  MatchResult r{std::move(drift_path), SampledPath(level, std::move(target_z)), std::move(sol.z), 0.0};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    r.sup_error = std::max(r.sup_error, std::abs(r.solved_z[j] - r.target_z[j]));
  }
  return r;
}

struct QuotientStep {
  int n = 0;
  double s = 0.0;            // s_n, largest level-n point <= t
  double d = 0.0;            // 2^n (x(s_n') - x(s_n))
  double increment = 0.0;    // d_n - d_{n-1}
  double predicted = 0.0;    // +-f_{n-1}(s_{n-1}) 2^{(n-1)/2}
  double recursion_error = 0.0;
  bool diverging = false;    // |increment| >= eps 2^{(n-1)/2} with |f_{n-1}(s_{n-1})| >= eps
};

/// Difference quotients of x_f around t along the dyadic brackets [s_n, s_n'].
///
/// Only the row n-1 wedge changes the increment between levels n-1 and n,
/// so d_n = d_{n-1} + sign_n f_{n-1}(s_{n-1}) 2^{(n-1)/2}, where sign_n = +1
/// when s_n = s_{n-1} (s_n' is the wedge peak) and -1 otherwise.
inline std::vector<QuotientStep> nondiff_quotients(const FSCoefficients& coeffs, const FunctionSequence& f, double t,
                                                   int n_max, double eps = 0.5) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("difference quotients need t in [0, 1)");
  if (n_max < 0 || n_max > coeffs.depth()) throw DomainError("n_max exceeds the coefficient depth");
  const int level = std::max(coeffs.depth(), 1);
  const SampledPath x = synthesize(coeffs, level);
  std::vector<QuotientStep> out;
  double prev_d = 0.0;
  double prev_s = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const DyadicGrid grid(n);
    const auto k = static_cast<std::size_t>(std::floor(std::ldexp(t, n)));
    const std::size_t stride = std::size_t{1} << (level - n);
    QuotientStep step;
    step.n = n;
    step.s = grid.point(k);
    step.d = std::ldexp(x[(k + 1) * stride] - x[k * stride], n);
    if (n > 0) {
      const double sign = step.s == prev_s ? 1.0 : -1.0;
      const double fv = f.term(n - 1, prev_s);
      const double scale = detail::sqrt2_pow(n - 1);
      step.increment = step.d - prev_d;
      step.predicted = sign * fv * scale;
      step.recursion_error = std::abs(step.increment - step.predicted);
      step.diverging = std::abs(fv) >= eps && std::abs(step.increment) >= eps * scale;
    }
    prev_d = step.d;
    prev_s = step.s;
    out.push_back(step);
  }
  return out;
}

}  // namespace pathwise
