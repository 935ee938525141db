#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pathwise/error.hpp"

namespace pathwise {

inline constexpr int kMaxLevel = 20;
inline constexpr int kDefaultLevel = 12;

namespace detail {

/// Neumaier-compensated running sum. Deterministic for a fixed add order.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void check_level(int level) {
  if (level < 0 || level > kMaxLevel) {
    throw DomainError("dyadic level " + std::to_string(level) + " outside [0, " +
                      std::to_string(kMaxLevel) + "]");
  }
}

}  // namespace detail

/// The dyadic partition {k 2^-n : k = 0..2^n} of [0, 1].
class DyadicGrid {
 public:
  explicit DyadicGrid(int level) : level_(level) { detail::check_level(level); }

  int level() const noexcept { return level_; }
  std::size_t intervals() const noexcept { return std::size_t{1} << level_; }
  std::size_t size() const noexcept { return intervals() + 1; }
  double mesh() const noexcept { return std::ldexp(1.0, -level_); }
  double point(std::size_t k) const noexcept { return std::ldexp(static_cast<double>(k), -level_); }

  bool contains(double t) const noexcept {
    if (!(t >= 0.0 && t <= 1.0)) return false;
    const double scaled = std::ldexp(t, level_);
    return scaled == std::floor(scaled);
  }

  /// Index k with t = k 2^-n; throws when t is not a grid point.
  std::size_t index_of(double t) const {
    if (!contains(t)) {
      throw DomainError("t = " + std::to_string(t) + " is not a point of the level-" +
                        std::to_string(level_) + " dyadic grid");
    }
    return static_cast<std::size_t>(std::ldexp(t, level_));
  }

  friend bool operator==(const DyadicGrid&, const DyadicGrid&) = default;

 private:
  int level_;
};

/// Successor s' of s in the level-n grid; 1 is its own successor.
inline double successor(double s, int n) {
  const DyadicGrid grid(n);
  const std::size_t k = grid.index_of(s);
  return k == grid.intervals() ? 1.0 : grid.point(k + 1);
}

/// A function known at the points of one dyadic grid.
class SampledPath {
 public:
  SampledPath(int level, std::vector<double> values) : level_(level), values_(std::move(values)) {
    detail::check_level(level);
    if (values_.size() != DyadicGrid(level).size()) {
      throw DomainError("sampled path of level " + std::to_string(level) + " needs " +
                        std::to_string(DyadicGrid(level).size()) + " values, got " +
                        std::to_string(values_.size()));
    }
  }

  template <class F>
  static SampledPath from_function(int level, F&& f) {
    const DyadicGrid grid(level);
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.point(k));
    return SampledPath(level, std::move(v));
  }

  int level() const noexcept { return level_; }
  DyadicGrid grid() const { return DyadicGrid(level_); }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }

  /// Value at a grid point (exact) or, off-grid, the piecewise-linear interpolant.
  double operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("path evaluated outside [0, 1]");
    const double scaled = std::ldexp(t, level_);
    const auto k = static_cast<std::size_t>(std::floor(scaled));
    if (k + 1 >= values_.size()) return values_.back();
    const double w = scaled - static_cast<double>(k);
    if (w == 0.0) return values_[k];
    return (1.0 - w) * values_[k] + w * values_[k + 1];
  }

  double at(double t) const { return values_[grid().index_of(t)]; }

  friend SampledPath operator+(const SampledPath& a, const SampledPath& b) {
    require_same_level(a, b);
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.values_[k] + b.values_[k];
    return SampledPath(a.level_, std::move(v));
  }
  friend SampledPath operator-(const SampledPath& a, const SampledPath& b) {
    require_same_level(a, b);
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.values_[k] - b.values_[k];
    return SampledPath(a.level_, std::move(v));
  }
  friend SampledPath operator*(double c, const SampledPath& a) {
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = c * a.values_[k];
    return SampledPath(a.level_, std::move(v));
  }

  friend bool operator==(const SampledPath&, const SampledPath&) = default;

  static void require_same_level(const SampledPath& a, const SampledPath& b) {
    if (a.level_ != b.level_) {
      throw DomainError("paths live on different levels (" + std::to_string(a.level_) + " vs " +
                        std::to_string(b.level_) + ")");
    }
  }

 private:
  int level_;
  std::vector<double> values_;
};

/// Samples of `path` at the level-m points. Values are copied, never resampled.
inline SampledPath restrict(const SampledPath& path, int m) {
  detail::check_level(m);
  if (m > path.level()) {
    throw DomainError("cannot restrict a level-" + std::to_string(path.level()) +
                      " path to finer level " + std::to_string(m));
  }
  const std::size_t stride = std::size_t{1} << (path.level() - m);
  std::vector<double> v(DyadicGrid(m).size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = path[k * stride];
  return SampledPath(m, std::move(v));
}

/// A continuous bounded-variation driver, known on a dyadic grid.
class BVDriver {
 public:
  explicit BVDriver(SampledPath path) : path_(std::move(path)) {
    detail::CompensatedSum tv;
    for (std::size_t k = 0; k + 1 < path_.size(); ++k) tv.add(std::abs(path_[k + 1] - path_[k]));
    total_variation_ = tv.value();
  }

  /// The identity driver A(t) = t.
  static BVDriver time(int level) {
    return BVDriver(SampledPath::from_function(level, [](double t) { return t; }));
  }

  const SampledPath& path() const noexcept { return path_; }
  int level() const noexcept { return path_.level(); }
  double total_variation() const noexcept { return total_variation_; }

  /// Variation of the driver on [0, t], t on the driver's grid.
  double variation_until(double t) const {
    const std::size_t j = path_.grid().index_of(t);
    detail::CompensatedSum tv;
    for (std::size_t k = 0; k < j; ++k) tv.add(std::abs(path_[k + 1] - path_[k]));
    return tv.value();
  }

  BVDriver restricted(int m) const { return BVDriver(restrict(path_, m)); }

 private:
  SampledPath path_;
  double total_variation_ = 0.0;
};

/// t -> <x>^n_t = sum over s in T_n, s <= t of (x(s') - x(s))^2.
///
/// The sum includes the increment that starts at t itself, so the value at
/// t = 0 is already the first squared increment. `as_driver()` gives the
/// non-anticipative version sum over s < t, which is the form used as an
/// integrator.
class QVCurve {
 public:
  QVCurve(int level, std::vector<double> values) : path_(level, std::move(values)) {}

  int level() const noexcept { return path_.level(); }
  std::span<const double> values() const noexcept { return path_.values(); }
  double operator[](std::size_t k) const noexcept { return path_[k]; }
  double at(double t) const { return path_.at(t); }

  BVDriver as_driver() const {
    std::vector<double> d(path_.size());
    d[0] = 0.0;
    for (std::size_t k = 1; k < d.size(); ++k) d[k] = path_[k - 1];
    return BVDriver(SampledPath(path_.level(), std::move(d)));
  }

 private:
  SampledPath path_;
};

namespace detail {

/// Left-point sum over the first `count` intervals of a level-n view into
/// arrays sampled at a finer level (stride apart).
inline double left_point_sum(std::span<const double> g, std::span<const double> a, std::size_t stride,
                             std::size_t count) {
  CompensatedSum s;
  for (std::size_t i = 0; i < count; ++i) {
    s.add(g[i * stride] * (a[(i + 1) * stride] - a[i * stride]));
  }
  return s.value();
}

}  // namespace detail

/// Left-point Riemann-Stieltjes sum of integrand g against driver A on [0, t].
inline double stieltjes_integral(const SampledPath& integrand, const BVDriver& driver, double t) {
  SampledPath::require_same_level(integrand, driver.path());
  const std::size_t j = integrand.grid().index_of(t);
  return detail::left_point_sum(integrand.values(), driver.path().values(), 1, j);
}

/// Running left-point integral t_j -> sum_{i<j} g(t_i)(A(t_{i+1}) - A(t_i)) on the whole grid.
inline SampledPath stieltjes_running(const SampledPath& integrand, const BVDriver& driver) {
  SampledPath::require_same_level(integrand, driver.path());
  const auto g = integrand.values();
  const auto a = driver.path().values();
  std::vector<double> out(g.size());
  detail::CompensatedSum s;
  out[0] = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    s.add(g[i] * (a[i + 1] - a[i]));
    out[i + 1] = s.value();
  }
  return SampledPath(integrand.level(), std::move(out));
}

}  // namespace pathwise
