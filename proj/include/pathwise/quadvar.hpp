#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pathwise/dyadic.hpp"
#include "pathwise/faber_schauder.hpp"

namespace pathwise {

/// t -> <x, y>^n_t on the level-n grid.
class CovCurve {
 public:
  CovCurve(int level, std::vector<double> values) : path_(level, std::move(values)) {}
  int level() const noexcept { return path_.level(); }
  std::span<const double> values() const noexcept { return path_.values(); }
  double operator[](std::size_t k) const noexcept { return path_[k]; }
  double at(double t) const { return path_.at(t); }

 private:
  SampledPath path_;
};

namespace detail {

inline std::size_t level_stride(const SampledPath& x, int n) {
  check_level(n);
  if (n > x.level()) {
    throw DomainError("partition level " + std::to_string(n) + " finer than path level " +
                      std::to_string(x.level()));
  }
  return std::size_t{1} << (x.level() - n);
}

/// floor((2^n - 1) t), the last summation index of the coefficient sums.
inline std::size_t floor_index(int n, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0, 1]");
  const double count = std::ldexp(1.0, n) - 1.0;
  return static_cast<std::size_t>(std::floor(count * t));
}

// Running sums of products of increments. Plain summation keeps the curve
// monotone when x == y.
inline std::vector<double> running_products(const SampledPath& x, const SampledPath& y, int n) {
  SampledPath::require_same_level(x, y);
  const std::size_t stride = level_stride(x, n);
  const std::size_t cells = std::size_t{1} << n;
  std::vector<double> out(cells + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double dx = x[(i + 1) * stride] - x[i * stride];
    const double dy = y[(i + 1) * stride] - y[i * stride];
    acc += dx * dy;
    out[i] = acc;
  }
  out[cells] = acc;  // 1' = 1 adds nothing
  return out;
}

}  // namespace detail

/// Whole curve t -> <x>^n_t on T_n.
inline QVCurve qv_curve(const SampledPath& x, int n) { return QVCurve(n, detail::running_products(x, x, n)); }

/// <x>^n_t = sum_{s in T_n, s <= t} (x(s') - x(s))^2.
inline double qv_level(const SampledPath& x, int n, double t) {
  const std::size_t j = DyadicGrid(n).index_of(t);
  return detail::running_products(x, x, n)[j];
}

inline CovCurve cov_curve(const SampledPath& x, const SampledPath& y, int n) {
  return CovCurve(n, detail::running_products(x, y, n));
}

/// <x, y>^n_t = sum_{s in T_n, s <= t} (x(s') - x(s))(y(s') - y(s)).
inline double cov_level(const SampledPath& x, const SampledPath& y, int n, double t) {
  const std::size_t j = DyadicGrid(n).index_of(t);
  return detail::running_products(x, y, n)[j];
}

/// 2^-n sum_{k <= floor((2^n-1)t)} theta_{n,k}^2, a single coefficient row.
inline double ell2(const FSCoefficients& c, int n, double t) {
  const auto row = c.row(n);
  const std::size_t last = detail::floor_index(n, t);
  detail::CompensatedSum s;
  for (std::size_t k = 0; k <= last; ++k) s.add(row[k] * row[k]);
  return std::ldexp(s.value(), -n);
}

/// 2^-n sum_{m<n} sum_{k <= floor((2^m-1)t)} theta_{m,k}^2.
///
/// At t = 1 and zero anchor/slope this equals qv_level(synthesize(c), n, 1)
/// exactly (in exact arithmetic) for any depth >= n.
inline double ell1(const FSCoefficients& c, int n, double t) {
  if (n < 0 || n > c.depth()) {
    throw DomainError("ell1 level " + std::to_string(n) + " exceeds coefficient depth " +
                      std::to_string(c.depth()));
  }
  detail::CompensatedSum s;
  for (int m = 0; m < n; ++m) {
    const auto row = c.row(m);
    const std::size_t last = detail::floor_index(m, t);
    for (std::size_t k = 0; k <= last; ++k) s.add(row[k] * row[k]);
  }
  return std::ldexp(s.value(), -n);
}

namespace detail {
inline void require_sign_row(std::span<const double> row, int n) {
  if (row.size() != (std::size_t{1} << n)) throw DomainError("coefficient row must have 2^n entries");
  for (double v : row) {
    if (v != 1.0 && v != -1.0) throw DomainError("non-coincidence frequency needs entries in {-1, +1}");
  }
}
}  // namespace detail

/// nu_n(t) = 2^-n card{k <= floor((2^n-1)t) : theta_{n,k} != vartheta_{n,k}} for +-1 rows.
inline double coincidence_frequency(std::span<const double> theta_x, std::span<const double> theta_y, int n,
                                    double t) {
  detail::require_sign_row(theta_x, n);
  detail::require_sign_row(theta_y, n);
  const std::size_t last = detail::floor_index(n, t);
  std::size_t differ = 0;
  for (std::size_t k = 0; k <= last; ++k) differ += theta_x[k] != theta_y[k] ? 1 : 0;
  return std::ldexp(static_cast<double>(differ), -n);
}

/// 2^-n sum_{k <= floor((2^n-1)t)} theta_{n,k} vartheta_{n,k}.
inline double row_covariation(std::span<const double> theta_x, std::span<const double> theta_y, int n, double t) {
  if (theta_x.size() != theta_y.size() || theta_x.size() != (std::size_t{1} << n)) {
    throw DomainError("coefficient rows must both have 2^n entries");
  }
  const std::size_t last = detail::floor_index(n, t);
  detail::CompensatedSum s;
  for (std::size_t k = 0; k <= last; ++k) s.add(theta_x[k] * theta_y[k]);
  return std::ldexp(s.value(), -n);
}

}  // namespace pathwise
