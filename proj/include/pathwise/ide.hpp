#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pathwise/dyadic.hpp"
#include "pathwise/error.hpp"
#include "pathwise/flow.hpp"
#include "pathwise/quadvar.hpp"

namespace pathwise {

using Drift = std::function<double(double, double)>;

/// dz = sigma(t, z) dx + b(t, z) dA, z(0) = z0, driven by a path x with
/// x(0) = 0 and quadratic variation <x> supplied as a BV driver.
///
/// All paths must share one level; the solvers may work on a coarser one.
class IDEProblem {
 public:
  IDEProblem(VolatilityField field, Drift drift, BVDriver driver_a, SampledPath x, BVDriver qv_driver, double z0)
      : field_(std::move(field)),
        drift_(std::move(drift)),
        driver_a_(std::move(driver_a)),
        x_(std::move(x)),
        qv_driver_(std::move(qv_driver)),
        z0_(z0) {
    if (x_.front() != 0.0) throw DomainError("the driving path must start at x(0) = 0");
    SampledPath::require_same_level(x_, driver_a_.path());
    SampledPath::require_same_level(x_, qv_driver_.path());
    if (!std::isfinite(z0_)) throw DomainError("initial value must be finite");
  }

  const VolatilityField& field() const noexcept { return field_; }
  const Drift& drift() const noexcept { return drift_; }
  const BVDriver& driver_a() const noexcept { return driver_a_; }
  const SampledPath& x() const noexcept { return x_; }
  const BVDriver& qv_driver() const noexcept { return qv_driver_; }
  double z0() const noexcept { return z0_; }
  int level() const noexcept { return x_.level(); }

 private:
  VolatilityField field_;
  Drift drift_;
  BVDriver driver_a_;
  SampledPath x_;
  BVDriver qv_driver_;
  double z0_;
};

enum class Scheme { picard, tonelli };

struct SolverOptions {
  double tolerance = 1e-12;      // Picard stops once the sup-defect is below this
  double accept_defect = 1e-8;   // a stalled iteration is accepted below this
  int max_iterations = 200;
  double tonelli_n = 64;         // Tonelli delay 1/n
  FlowOptions flow{};
};

struct BSolution {
  SampledPath path;
  double defect = 0.0;  // last sup |B^{k+1} - B^k| (0 for Tonelli)
  int iterations = 0;
  std::vector<double> trace;
};

struct IDESolution {
  SampledPath B;
  SampledPath z;
  double residual_report = 0.0;  // final Picard defect
  double follmer_defect = 0.0;   // sup |z - z0 - int sigma dx - int b dA|
  int iterations = 0;
};

namespace detail {

/// Increments of the Doss-Sussmann integral equation on one grid cell,
///   g1 dA + g2 ds + g3 d<x>,
/// g1 = b(phi)/phi_xi, g2 = -phi_tau/phi_xi, g3 = -phi_tt/(2 phi_xi), all at
/// (t_i, B, x(t_i)). The last evaluation per cell is cached and reused when the
/// iterate did not move there.
class DossSussmannKernel {
 public:
  DossSussmannKernel(const IDEProblem& p, int level, const FlowOptions& flow_opt)
      : problem_(p),
        flow_opt_(flow_opt),
        x_(restrict(p.x(), level)),
        a_(restrict(p.driver_a().path(), level)),
        q_(restrict(p.qv_driver().path(), level)),
        grid_(level),
        cached_b_(grid_.intervals(), std::numeric_limits<double>::quiet_NaN()),
        cached_inc_(grid_.intervals(), 0.0) {}

  std::size_t cells() const noexcept { return grid_.intervals(); }
  const DyadicGrid& grid() const noexcept { return grid_; }
  const SampledPath& x() const noexcept { return x_; }
  const SampledPath& a() const noexcept { return a_; }

  double increment(std::size_t i, double b) {
    if (cached_b_[i] == b) return cached_inc_[i];
    const double t = grid_.point(i);
    const FlowPoint fp = flow_derivatives(problem_.field(), t, b, x_[i], flow_opt_);
    const double g1 = problem_.drift()(t, fp.value) / fp.d_xi;
    const double g2 = -fp.d_tau / fp.d_xi;
    const double g3 = -0.5 * fp.d_tt / fp.d_xi;
    const double inc = g1 * (a_[i + 1] - a_[i]) + g2 * grid_.mesh() + g3 * (q_[i + 1] - q_[i]);
    if (!std::isfinite(inc)) throw NumericalError("integral-equation kernel is not finite at t = " + std::to_string(t));
    cached_b_[i] = b;
    cached_inc_[i] = inc;
    return inc;
  }

 private:
  const IDEProblem& problem_;
  FlowOptions flow_opt_;
  SampledPath x_;
  SampledPath a_;
  SampledPath q_;
  DyadicGrid grid_;
  std::vector<double> cached_b_;
  std::vector<double> cached_inc_;
};

inline void check_solve_level(const IDEProblem& p, int level) {
  check_level(level);
  if (level > p.level()) {
    throw DomainError("working level " + std::to_string(level) + " finer than problem level " +
                      std::to_string(p.level()));
  }
}

inline BSolution picard(const IDEProblem& p, int level, const SolverOptions& opt) {
  DossSussmannKernel kernel(p, level, opt.flow);
  const std::size_t n = kernel.cells();
  std::vector<double> b(n + 1, p.z0());
  std::vector<double> next(n + 1);
  BSolution out{SampledPath(level, b), 0.0, 0, {}};
  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    CompensatedSum acc;
    acc.add(p.z0());
    next[0] = p.z0();
    for (std::size_t i = 0; i < n; ++i) {
      acc.add(kernel.increment(i, b[i]));
      next[i + 1] = acc.value();
    }
    double defect = 0.0;
    for (std::size_t j = 0; j <= n; ++j) defect = std::max(defect, std::abs(next[j] - b[j]));
    b.swap(next);
    out.trace.push_back(defect);
    out.iterations = iter;
    out.defect = defect;
    const bool stalled = iter > 5 && defect >= out.trace[iter - 6];
    if (defect <= opt.tolerance || (stalled && defect <= opt.accept_defect)) {
      out.path = SampledPath(level, std::move(b));
      return out;
    }
  }
  throw NumericalError("Picard iteration did not converge in " + std::to_string(opt.max_iterations) +
                           " sweeps (last defect " + std::to_string(out.defect) + ")",
                       out.trace);
}

/// B(t) = z0 + I(t - 1/n), where I is the running left-point integral
/// interpolated linearly between grid points. Built forward in time: every
/// value needs only increments from strictly earlier cells.
inline BSolution tonelli(const IDEProblem& p, int level, const SolverOptions& opt) {
  if (!(opt.tonelli_n >= 1.0)) throw DomainError("Tonelli delay count must be >= 1");
  DossSussmannKernel kernel(p, level, opt.flow);
  const std::size_t n = kernel.cells();
  const double lag = std::ldexp(1.0, level) / opt.tonelli_n;  // delay in grid cells
  std::vector<double> b(n + 1);
  std::vector<double> prefix(n + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t j = 0; j <= n; ++j) {
    const double pos = static_cast<double>(j) - lag;
    if (pos <= 0.0) {
      b[j] = p.z0();
    } else {
      const auto m = static_cast<std::size_t>(std::floor(pos));
      const double w = pos - static_cast<double>(m);
      const double integral = w == 0.0 ? prefix[m] : (1.0 - w) * prefix[m] + w * prefix[m + 1];
      b[j] = p.z0() + integral;
    }
    if (j < n) {
      acc.add(kernel.increment(j, b[j]));
      prefix[j + 1] = acc.value();
    }
  }
  return BSolution{SampledPath(level, std::move(b)), 0.0, 1, {}};
}

}  // namespace detail

/// Solution of the Stieltjes integral equation for B on the level-`level` grid.
inline BSolution solve_B_report(const IDEProblem& p, Scheme scheme, int level, const SolverOptions& opt = {}) {
  detail::check_solve_level(p, level);
  return scheme == Scheme::picard ? detail::picard(p, level, opt) : detail::tonelli(p, level, opt);
}

inline SampledPath solve_B(const IDEProblem& p, Scheme scheme, int level, const SolverOptions& opt = {}) {
  return solve_B_report(p, scheme, level, opt).path;
}

/// Sup over the grid of |z(t) - z0 - sum sigma(s, z) dx - sum b(s, z) dA|.
inline double follmer_defect(const IDEProblem& p, const SampledPath& z) {
  const int level = z.level();
  const SampledPath x = restrict(p.x(), level);
  const SampledPath a = restrict(p.driver_a().path(), level);
  const DyadicGrid grid(level);
  detail::CompensatedSum acc;
  double worst = std::abs(z[0] - p.z0());
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const double t = grid.point(i);
    acc.add(p.field().sigma(t, z[i]) * (x[i + 1] - x[i]));
    acc.add(p.drift()(t, z[i]) * (a[i + 1] - a[i]));
    worst = std::max(worst, std::abs(z[i + 1] - p.z0() - acc.value()));
  }
  return worst;
}

/// z(t) = phi(t, B(t), x(t)) with B from the Picard scheme.
inline IDESolution solve_ide(const IDEProblem& p, int level, const SolverOptions& opt = {}) {
  BSolution b = solve_B_report(p, Scheme::picard, level, opt);
  const SampledPath x = restrict(p.x(), level);
  const DyadicGrid grid(level);
  std::vector<double> z(grid.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = flow(p.field(), grid.point(j), b.path[j], x[j], opt.flow);
  IDESolution out{std::move(b.path), SampledPath(level, std::move(z)), b.defect, 0.0, b.iterations};
  out.follmer_defect = follmer_defect(p, out.z);
  return out;
}

namespace detail {

inline double local_qv_defect(const SampledPath& z, const VolatilityField& field, const std::vector<double>& dq, int n) {
  const QVCurve qz = qv_curve(z, n);
  const SampledPath zn = restrict(z, n);
  const DyadicGrid grid(n);
  double predicted = 0.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (j + 1 < grid.size()) {
      const double s = field.sigma(grid.point(j), zn[j]);
      predicted += s * s * dq[j];
    }
    worst = std::max(worst, std::abs(qz[j] - predicted));
  }
  return worst;
}

}  // namespace detail

/// sup_t | <z>^n_t - sum_{s <= t} sigma^2(s, z(s)) d<x>_s | over T_n, where
/// d<x>_s = (x(s') - x(s))^2 is read off the level-n curve of x.
inline double verify_local_qv(const SampledPath& z, const VolatilityField& field, const QVCurve& qv_x, int n) {
  if (qv_x.level() != n) throw DomainError("the <x> curve must be taken at the level being checked");
  std::vector<double> dq(qv_x.values().size() - 1);
  for (std::size_t j = 0; j < dq.size(); ++j) dq[j] = qv_x[j] - (j == 0 ? 0.0 : qv_x[j - 1]);
  return detail::local_qv_defect(z, field, dq, n);
}

/// As above with d<x>_s = Q(s') - Q(s) for a BV driver Q, e.g. the analytic <x>.
inline double verify_local_qv(const SampledPath& z, const VolatilityField& field, const BVDriver& qv_driver, int n) {
  const SampledPath q = restrict(qv_driver.path(), n);
  std::vector<double> dq(q.size() - 1);
  for (std::size_t j = 0; j < dq.size(); ++j) dq[j] = q[j + 1] - q[j];
  return detail::local_qv_defect(z, field, dq, n);
}

/// A-priori bound (m + cV) e^{cV} for B when every kernel satisfies
/// |g(t, y)| <= c (1 + |y|), |z0| <= m and V is the total driver variation.
inline double gronwall_bound(double m, double c, double total_variation) {
  return (m + c * total_variation) * std::exp(c * total_variation);
}

}  // namespace pathwise
