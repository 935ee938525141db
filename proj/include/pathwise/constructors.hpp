#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathwise/dyadic.hpp"
#include "pathwise/faber_schauder.hpp"

namespace pathwise {

/// A sequence (f_n) of bounded functions on [0, 1] with uniform limit f_inf.
///
/// Construction spot-checks |f_n(t)| <= uniform_bound on a 1024-point grid
/// for n <= 32. Uniform convergence itself cannot be verified for arbitrary
/// callables; see check_uniform_convergence().
class FunctionSequence {
 public:
  using Term = std::function<double(int, double)>;
  using Limit = std::function<double(double)>;

  FunctionSequence(Term term, Limit limit, double uniform_bound, std::string name = {})
      : term_(std::move(term)), limit_(std::move(limit)), bound_(uniform_bound), name_(std::move(name)) {
    if (!(bound_ >= 0.0) || !std::isfinite(bound_)) throw DomainError("uniform bound must be finite and >= 0");
    constexpr int kPoints = 1024;
    for (int n = 0; n <= 32; ++n) {
      for (int i = 0; i < kPoints; ++i) {
        const double t = static_cast<double>(i) / (kPoints - 1);
        const double v = term_(n, t);
        if (!(std::abs(v) <= bound_ * (1.0 + 1e-12))) {
          throw DomainError("sequence '" + name_ + "' violates its uniform bound at n = " +
                            std::to_string(n) + ", t = " + std::to_string(t));
        }
      }
    }
  }

  /// f_n = f for every n.
  static FunctionSequence stationary(std::function<double(double)> f, double bound, std::string name = {}) {
    auto g = f;
    return FunctionSequence([g](int, double t) { return g(t); }, std::move(f), bound, std::move(name));
  }

  static FunctionSequence constant(double c) {
    return stationary([c](double) { return c; }, std::abs(c), "constant");
  }

  double term(int n, double t) const { return term_(n, t); }
  double limit(double t) const { return limit_(t); }
  double uniform_bound() const noexcept { return bound_; }
  const std::string& name() const noexcept { return name_; }

  friend FunctionSequence operator+(const FunctionSequence& f, const FunctionSequence& g) {
    return FunctionSequence([f, g](int n, double t) { return f.term(n, t) + g.term(n, t); },
                            [f, g](double t) { return f.limit(t) + g.limit(t); },
                            f.uniform_bound() + g.uniform_bound(), f.name() + "+" + g.name());
  }

 private:
  Term term_;
  Limit limit_;
  double bound_;
  std::string name_;
};

/// sup_t |f_n(t) - f_inf(t)| sampled for n = 16, 32, 64.
struct ConvergenceReport {
  double sup16 = 0.0;
  double sup32 = 0.0;
  double sup64 = 0.0;
  bool suspicious = false;  // the sampled distances do not decrease
};

inline ConvergenceReport check_uniform_convergence(const FunctionSequence& f) {
  auto sup_at = [&](int n) {
    double s = 0.0;
    for (int i = 0; i < 1024; ++i) {
      const double t = i / 1023.0;
      s = std::max(s, std::abs(f.term(n, t) - f.limit(t)));
    }
    return s;
  };
  ConvergenceReport r{sup_at(16), sup_at(32), sup_at(64), false};
  r.suspicious = r.sup32 >= r.sup16 && r.sup64 >= r.sup32 && r.sup64 > 1e-12;
  return r;
}

/// Rotation number alpha > 0 for the shifted coefficients f_n(alpha k mod 1).
///
/// An optional low-order correction `alpha_lo` lets alpha carry more than
/// double precision (alpha = alpha_hi + alpha_lo).
class IrrationalShift {
 public:
  explicit IrrationalShift(double alpha, double alpha_lo = 0.0) : alpha_(alpha), alpha_lo_(alpha_lo) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("rotation number must be > 0");
  }

  double alpha() const noexcept { return alpha_; }
  double alpha_lo() const noexcept { return alpha_lo_; }

  /// alpha*k mod 1. The product alpha_hi*k is split exactly into p + e with
  /// an fma, so only the final additions round.
  double fractional_multiple(std::uint64_t k) const {
    const auto kd = static_cast<double>(k);
    const double p = alpha_ * kd;
    const double e = std::fma(alpha_, kd, -p);
    double f = p - std::floor(p);
    f += e + alpha_lo_ * kd;
    f -= std::floor(f);
    if (f >= 1.0) f = std::nextafter(1.0, 0.0);
    return f;
  }

 private:
  double alpha_;
  double alpha_lo_;
};

/// theta_{n,k} = f_n(k 2^-n), n < depth; anchor and slope zero.
inline FSCoefficients x_coefficients(const FunctionSequence& f, int depth) {
  auto c = FSCoefficients::zeros(depth);
  for (int n = 0; n < depth; ++n) {
    auto row = c.row(n);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = f.term(n, std::ldexp(static_cast<double>(k), -n));
  }
  return c;
}

/// vartheta_{n,k} = f_n(alpha k mod 1), n < depth.
inline FSCoefficients y_coefficients(const FunctionSequence& f, const IrrationalShift& shift, int depth) {
  auto c = FSCoefficients::zeros(depth);
  for (int n = 0; n < depth; ++n) {
    auto row = c.row(n);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = f.term(n, shift.fractional_multiple(k));
  }
  return c;
}

/// x_f on the level-N grid. Rows m >= N vanish on T_N, so these samples are
/// those of the full series.
inline SampledPath build_x(const FunctionSequence& f, int level) {
  return synthesize(x_coefficients(f, level), level);
}

inline SampledPath build_y(const FunctionSequence& f, const IrrationalShift& shift, int level) {
  return synthesize(y_coefficients(f, shift, level), level);
}

enum class QVKind { curved, linear };

namespace detail {

/// Composite Simpson rule on [a, b] with `panels` (even) panels.
template <class F>
double simpson(F&& f, double a, double b, std::size_t panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  CompensatedSum s;
  s.add(f(a));
  s.add(f(b));
  for (std::size_t i = 1; i < panels; ++i) s.add((i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i)));
  return s.value() * h / 3.0;
}

inline constexpr std::size_t kQuadraturePanels = std::size_t{1} << 14;

}  // namespace detail

/// Limit quadratic variation: curved -> int_0^t f_inf^2, linear -> t int_0^1 f_inf^2.
inline double predicted_qv(const FunctionSequence& f, QVKind kind, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("predicted_qv needs t in [0, 1]");
  auto sq = [&](double s) {
    const double v = f.limit(s);
    return v * v;
  };
  if (kind == QVKind::linear) return t * detail::simpson(sq, 0.0, 1.0, detail::kQuadraturePanels);
  if (t == 0.0) return 0.0;
  return detail::simpson(sq, 0.0, t, detail::kQuadraturePanels);
}

/// Predicted <x> at every level-N grid point, as an integrator. Accumulates
/// cell by cell so the whole curve costs one pass over 2^14 panels.
inline BVDriver analytic_qv_driver(const FunctionSequence& f, QVKind kind, int level) {
  const DyadicGrid grid(level);
  auto sq = [&](double s) {
    const double v = f.limit(s);
    return v * v;
  };
  std::vector<double> d(grid.size(), 0.0);
  if (kind == QVKind::linear) {
    const double total = detail::simpson(sq, 0.0, 1.0, detail::kQuadraturePanels);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = grid.point(k) * total;
  } else {
    const std::size_t per_cell = std::max<std::size_t>(2, detail::kQuadraturePanels >> level);
    detail::CompensatedSum acc;
    for (std::size_t k = 0; k + 1 < d.size(); ++k) {
      acc.add(detail::simpson(sq, grid.point(k), grid.point(k + 1), per_cell));
      d[k + 1] = acc.value();
    }
  }
  return BVDriver(SampledPath(level, std::move(d)));
}

/// Hoelder-1/2 constant for a series with |theta| <= bound: adjacent level-N
/// increments are at most bound * 2^{-N} sum_{m<N} 2^{m/2} < bound (1 + sqrt 2) 2^{-N/2}.
inline double holder_constant(double coefficient_bound) { return coefficient_bound * (1.0 + std::numbers::sqrt2); }

/// Named preset sequences, plus "unit" (f_n = 1, <x>_t = t).
inline FunctionSequence preset_sequence(std::string_view name) {
  using std::numbers::pi;
  if (name == "fig1-left") {
    return FunctionSequence::stationary([](double t) { return std::cos(2 * pi * t); }, 1.0, "fig1-left");
  }
  if (name == "fig1-right") {
    return FunctionSequence::stationary(
        [](double t) {
          const double s = std::sin(7 * t);
          return s * s;
        },
        1.0, "fig1-right");
  }
  if (name == "fig2-left") {
    return FunctionSequence::stationary([](double t) { return std::sin(2 * pi * t); }, 1.0, "fig2-left");
  }
  if (name == "fig2-right") {
    return FunctionSequence(
        [](int n, double t) {
          const double nd = n;
          return (10 * t - nd) / (1 + nd) * std::cos(6 * pi * nd * t / (1 + nd));
        },
        [](double t) { return -std::cos(6 * pi * t); }, 10.0, "fig2-right");
  }
  if (name == "unit") {
    return FunctionSequence::stationary([](double) { return 1.0; }, 1.0, "unit");
  }
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1-left", "fig1-right", "fig2-left", "fig2-right", "unit"};
  return names;
}

/// fig1-* presets build x_f (curved QV); fig2-* presets build y_alpha^f.
inline QVKind preset_kind(std::string_view name) {
  return name.starts_with("fig2") ? QVKind::linear : QVKind::curved;
}

/// e, the rotation number used by the fig2-* presets.
inline IrrationalShift preset_shift() { return IrrationalShift(std::numbers::e); }

/// Path for a preset name: x_f for curved presets, y_alpha^f otherwise.
inline SampledPath build_preset(std::string_view name, int level, const IrrationalShift& shift = preset_shift()) {
  const auto f = preset_sequence(name);
  return preset_kind(name) == QVKind::curved ? build_x(f, level) : build_y(f, shift, level);
}

}  // namespace pathwise
