#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "pathwise/constructors.hpp"
#include "pathwise/expression.hpp"
#include "pathwise/flow.hpp"
#include "pathwise/ide.hpp"

namespace pathwise {

/// Largest |g| over t in [0, 1], xi in [-xi_max, xi_max] on a 65 x 129 lattice.
template <class G>
double sampled_sup(const G& g, double xi_max = 10.0) {
  double sup = 0.0;
  for (int i = 0; i <= 64; ++i) {
    for (int j = 0; j <= 128; ++j) sup = std::max(sup, std::abs(g(i / 64.0, -xi_max + 2.0 * xi_max * j / 128.0)));
  }
  return sup;
}

/// sigma(t, xi) from an expression; partials are exact symbolic derivatives,
/// bounds are lattice estimates.
inline VolatilityField field_from_expression(std::string_view text) {
  const expr::Expr s = expr::parse(text);
  const expr::Expr st = s.derivative(expr::Var::t);
  const expr::Expr sx = s.derivative(expr::Var::xi);
  VolatilityField f{[s](double t, double xi) { return s(t, xi); }, [st](double t, double xi) { return st(t, xi); },
                    [sx](double t, double xi) { return sx(t, xi); }, 0.0, 0.0, std::string(text)};
  f.sup_sigma_t = sampled_sup(f.sigma_t);
  f.sup_sigma_xi = sampled_sup(f.sigma_xi);
  return f;
}

/// Named fields "sqrt1p" and "bs", or an expression in t and xi.
inline VolatilityField field_by_name(std::string_view name) {
  if (name == "sqrt1p") return VolatilityField::sqrt1p();
  if (name == "bs") return VolatilityField::black_scholes();
  return field_from_expression(name);
}

inline Drift drift_from_expression(std::string_view text) {
  const expr::Expr b = expr::parse(text);
  return [b](double t, double xi) { return b(t, xi); };
}

/// f_n(t) from an expression in t and n. Without n the sequence is stationary;
/// otherwise the limit is read off at n = 2^20 unless given.
inline FunctionSequence sequence_from_expression(std::string_view text, std::string_view limit_text = {}) {
  const expr::Expr f = expr::parse(text);
  const expr::Expr lim = limit_text.empty() ? f : expr::parse(limit_text);
  const bool indexed = f.depends_on(expr::Var::n);
  auto term = [f](int n, double t) { return f(t, 0.0, n); };
  auto limit = [lim, indexed, explicit_limit = !limit_text.empty()](double t) {
    return lim(t, 0.0, indexed && !explicit_limit ? std::ldexp(1.0, 20) : 0.0);
  };
  double bound = 0.0;
  for (int n = 0; n <= 32; ++n) {
    for (int i = 0; i < 1024; ++i) bound = std::max(bound, std::abs(term(n, i / 1023.0)));
  }
  return FunctionSequence(term, limit, bound, std::string(text));
}

/// A preset name or an f_n(t) expression.
inline FunctionSequence sequence_by_name(std::string_view name) {
  for (const auto& p : preset_names()) {
    if (name == p) return preset_sequence(name);
  }
  return sequence_from_expression(name);
}

}  // namespace pathwise
