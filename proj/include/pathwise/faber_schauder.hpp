#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pathwise/dyadic.hpp"

namespace pathwise {

namespace detail {

/// 2^(m/2), exact for even m.
inline double sqrt2_pow(int m) {
  const double base = std::ldexp(1.0, m >= 0 ? m / 2 : -((-m) / 2));
  if (m % 2 == 0) return base;
  return m > 0 ? base * std::numbers::sqrt2 : base / std::numbers::sqrt2;
}

/// Peak height 2^{-(m+2)/2} of the wedge e_{m,k}.
inline double wedge_height(int m) { return sqrt2_pow(-(m + 2)); }

}  // namespace detail

/// Faber-Schauder development x = anchor + slope*t + sum theta_{m,k} e_{m,k},
/// truncated after `depth()` rows. Row m holds 2^m coefficients.
class FSCoefficients {
 public:
  FSCoefficients() = default;

  FSCoefficients(double anchor, double slope, std::vector<std::vector<double>> theta)
      : anchor_(anchor), slope_(slope), theta_(std::move(theta)) {
    if (static_cast<int>(theta_.size()) > kMaxLevel) {
      throw DomainError("coefficient depth exceeds the maximum level");
    }
    for (std::size_t m = 0; m < theta_.size(); ++m) {
      if (theta_[m].size() != (std::size_t{1} << m)) {
        throw DomainError("coefficient row " + std::to_string(m) + " must have " +
                          std::to_string(std::size_t{1} << m) + " entries");
      }
    }
  }

  /// All-zero array of the given depth.
  static FSCoefficients zeros(int depth, double anchor = 0.0, double slope = 0.0) {
    detail::check_level(depth);
    std::vector<std::vector<double>> theta(static_cast<std::size_t>(depth));
    for (int m = 0; m < depth; ++m) theta[m].assign(std::size_t{1} << m, 0.0);
    return FSCoefficients(anchor, slope, std::move(theta));
  }

  double anchor() const noexcept { return anchor_; }
  double slope() const noexcept { return slope_; }
  int depth() const noexcept { return static_cast<int>(theta_.size()); }

  std::span<const double> row(int m) const {
    check_row(m);
    return theta_[m];
  }
  std::span<double> row(int m) {
    check_row(m);
    return theta_[m];
  }
  double operator()(int m, std::size_t k) const { return row(m)[k]; }

  const std::vector<std::vector<double>>& rows() const noexcept { return theta_; }

  friend bool operator==(const FSCoefficients&, const FSCoefficients&) = default;

 private:
  void check_row(int m) const {
    if (m < 0 || m >= depth()) {
      throw DomainError("coefficient row " + std::to_string(m) + " outside depth " +
                        std::to_string(depth()));
    }
  }

  double anchor_ = 0.0;
  double slope_ = 0.0;
  std::vector<std::vector<double>> theta_;
};

/// Wedge e_{m,k}(t) = 2^{-m/2} max(0, min(u, 1-u)), u = 2^m t - k.
inline double basis_eval(int m, std::size_t k, double t) {
  if (m < 0 || m > kMaxLevel) throw DomainError("basis level out of range");
  if (k >= (std::size_t{1} << m)) {
    throw DomainError("basis index k = " + std::to_string(k) + " outside [0, 2^" + std::to_string(m) +
                      ")");
  }
  const double u = std::ldexp(t, m) - static_cast<double>(k);
  const double wedge = std::max(0.0, std::min(u, 1.0 - u));
  return detail::sqrt2_pow(-m) * wedge;
}

/// Coefficients theta_{m,k} = 2^{m/2} (2x(mid) - x(left) - x(right)) for m < depth.
inline FSCoefficients analyze(const SampledPath& path, int depth) {
  if (path.level() < 1) throw DomainError("analysis needs a path of level >= 1");
  if (depth < 0 || depth > path.level()) {
    throw DomainError("analysis depth " + std::to_string(depth) + " exceeds path level " +
                      std::to_string(path.level()));
  }
  std::vector<std::vector<double>> theta(static_cast<std::size_t>(depth));
  for (int m = 0; m < depth; ++m) {
    const std::size_t stride = std::size_t{1} << (path.level() - m);
    const std::size_t half = stride / 2;
    const double scale = detail::sqrt2_pow(m);
    auto& row = theta[m];
    row.resize(std::size_t{1} << m);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::size_t left = k * stride;
      row[k] = scale * (2.0 * path[left + half] - path[left] - path[left + stride]);
    }
  }
  return FSCoefficients(path.front(), path.back() - path.front(), std::move(theta));
}

inline FSCoefficients analyze(const SampledPath& path) { return analyze(path, path.level()); }

/// Series values at the level-N points, built by midpoint displacement:
/// each new midpoint is the mean of its neighbours plus theta_{m,k} times the
/// wedge height. Rows m >= depth contribute nothing.
inline SampledPath synthesize(const FSCoefficients& coeffs, int level) {
  detail::check_level(level);
  if (level < coeffs.depth()) {
    throw DomainError("synthesis level " + std::to_string(level) + " below coefficient depth " +
                      std::to_string(coeffs.depth()));
  }
  const std::size_t n = std::size_t{1} << level;
  std::vector<double> v(n + 1, 0.0);
  v[0] = coeffs.anchor();
  v[n] = coeffs.anchor() + coeffs.slope();
  for (int m = 0; m < level; ++m) {
    const std::size_t stride = n >> m;
    const std::size_t half = stride / 2;
    const bool active = m < coeffs.depth();
    const double height = detail::wedge_height(m);
    for (std::size_t k = 0; k < (std::size_t{1} << m); ++k) {
      const std::size_t left = k * stride;
      double mid = 0.5 * (v[left] + v[left + stride]);
      if (active) mid += coeffs(m, k) * height;
      v[left + half] = mid;
    }
  }
  return SampledPath(level, std::move(v));
}

/// Direct evaluation of the truncated series at any t in [0, 1], one wedge per row.
inline double evaluate_series(const FSCoefficients& coeffs, double t) {
  double value = coeffs.anchor() + coeffs.slope() * t;
  for (int m = 0; m < coeffs.depth(); ++m) {
    const double scaled = std::ldexp(t, m);
    auto k = static_cast<std::size_t>(std::floor(scaled));
    const std::size_t count = std::size_t{1} << m;
    if (k >= count) k = count - 1;
    value += coeffs(m, k) * basis_eval(m, k, t);
  }
  return value;
}

}  // namespace pathwise
