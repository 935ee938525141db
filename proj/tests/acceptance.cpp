// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance <path-to-cli>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pathwise/pathwise.hpp"

using namespace pathwise;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void info(const std::string& line) { std::printf("      info: %s\n", line.c_str()); }

double sup_abs_diff(const SampledPath& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// Errors e_0, e_1, ... may rise by at most a factor of 2 from one level to the next.
bool trend_ok(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e[i] > 2.0 * e[i - 1]) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + fmt(x);
  return s;
}

// ---- 1 ----
Outcome coefficient_identity() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto c = FSCoefficients::zeros(12);
    for (int m = 0; m < 12; ++m) {
      for (double& v : c.row(m)) v = u(rng);
    }
    const SampledPath x = synthesize(c, 12);
    for (int n = 4; n <= 12; ++n) worst = std::max(worst, std::abs(qv_level(x, n, 1.0) - ell1(c, n, 1.0)));
  }
  return {worst <= 1e-10, "max |qv - ell1| = " + fmt(worst)};
}

// ---- 2 ----
Outcome curved_qv() {
  const auto f = preset_sequence("fig1-left");
  const SampledPath x = build_x(f, 14);
  const DyadicGrid coarse(7);
  std::vector<double> predicted(coarse.size());
  for (std::size_t k = 0; k < coarse.size(); ++k) predicted[k] = predicted_qv(f, QVKind::curved, coarse.point(k));
  std::vector<double> errors;
  for (int n : {8, 10, 12, 14}) {
    const QVCurve q = qv_curve(x, n);
    double e = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      e = std::max(e, std::abs(q.at(coarse.point(k)) - predicted[k]));
    }
    errors.push_back(e);
  }
  return {errors.back() <= 0.05 && trend_ok(errors), "sup errors n=8,10,12,14: " + join(errors)};
}

// ---- 3 ----
Outcome linear_qv() {
  const SampledPath y = build_y(preset_sequence("fig2-left"), IrrationalShift(std::numbers::e), 14);
  std::vector<double> errors;
  for (int n : {8, 10, 12, 14}) errors.push_back(std::abs(qv_level(y, n, 1.0) - 0.5));
  return {errors.back() <= 0.05 && trend_ok(errors), "|<y>_1 - 1/2| n=8,10,12,14: " + join(errors)};
}

// ---- 4 ----
Outcome polarization() {
  const int n = 12;
  const auto& names = preset_names();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const SampledPath x = build_preset(names[pick(rng)], n);
    const SampledPath y = build_preset(names[pick(rng)], n);
    const CovCurve c = cov_curve(x, y, n);
    const QVCurve plus = qv_curve(x + y, n), minus = qv_curve(x - y, n);
    for (std::size_t k = 0; k < c.values().size(); ++k) {
      worst = std::max(worst, std::abs(c[k] - 0.25 * (plus[k] - minus[k])));
    }
  }
  const SampledPath xc = build_x(preset_sequence("fig1-left"), 14);
  const SampledPath xs = build_x(preset_sequence("fig2-left"), 14);
  const double cross = cov_level(xc, xs, 14, 1.0);
  return {worst <= 1e-12 && std::abs(cross) <= 0.05,
          "polarization defect " + fmt(worst) + ", <x_cos, x_sin>_1 = " + fmt(cross)};
}

// ---- 5 ----
Outcome ito_residuals() {
  double square = 0.0, cube = 0.0;
  for (const auto& name : preset_names()) {
    const SampledPath x = build_preset(name, 14);
    for (int n = 1; n <= 14; ++n) {
      const DyadicGrid g(std::min(n, 8));
      for (std::size_t k = 0; k < g.size(); ++k) {
        square = std::max(square, std::abs(ito_residual(ScalarMap::square(), x, n, g.point(k))));
      }
    }
    const DyadicGrid g(7);
    for (std::size_t k = 0; k < g.size(); ++k) {
      cube = std::max(cube, std::abs(ito_residual(ScalarMap::cube(), x, 14, g.point(k))));
    }
  }
  return {square <= 1e-12 && cube <= 0.02, "xi^2 residual " + fmt(square) + ", xi^3 residual at n=14 " + fmt(cube)};
}

// ---- 6 ----
Outcome flow_suite() {
  FlowIdentityReport worst;
  for (const auto& field : {VolatilityField::sqrt1p(), VolatilityField::black_scholes(),
                            field_from_expression("0.5 + 0.3*sin(xi) + 0.1*t*cos(xi)")}) {
    const auto r = flow_identity_suite(field, 50, 11);
    worst.semigroup = std::max(worst.semigroup, r.semigroup);
    worst.time_derivative = std::max(worst.time_derivative, r.time_derivative);
    worst.second_order = std::max(worst.second_order, r.second_order);
    worst.d_xi_fd = std::max(worst.d_xi_fd, r.d_xi_fd);
    worst.d_xi_within_bounds = worst.d_xi_within_bounds && r.d_xi_within_bounds;
  }
  struct Closed {
    VolatilityField field;
    std::function<double(double, double, double)> phi;
  };
  const std::vector<Closed> closed{
      {VolatilityField::constant(0.7), [](double, double xi, double t) { return xi + 0.7 * t; }},
      {VolatilityField::black_scholes(),
       [](double tau, double xi, double t) { return xi * std::exp((0.2 + 0.1 * tau) * t); }},
      {VolatilityField::sqrt1p(), [](double, double xi, double t) { return std::sinh(t + std::asinh(xi)); }}};
  double closed_err = 0.0;
  for (const auto& c : closed) {
    for (double tau : {0.0, 0.5, 1.0}) {
      for (double xi : {-2.0, -0.5, 0.0, 0.8, 2.0}) {
        for (double t : {-1.0, -0.3, 0.4, 1.0}) {
          closed_err = std::max(closed_err, std::abs(flow(c.field, tau, xi, t) - c.phi(tau, xi, t)));
        }
      }
    }
  }
  const bool pass = worst.semigroup <= 1e-8 && worst.time_derivative <= 1e-7 && worst.second_order <= 1e-5 &&
                    worst.d_xi_fd <= 1e-5 && worst.d_xi_within_bounds && closed_err <= 1e-9;
  return {pass, "semigroup " + fmt(worst.semigroup) + ", first-order " + fmt(worst.time_derivative) +
                    ", second-order " + fmt(worst.second_order) + ", phi_xi fd " + fmt(worst.d_xi_fd) +
                    ", closed forms " + fmt(closed_err)};
}

// ---- 7 ----
std::vector<double> langevin_oracle(const SampledPath& x, double s, double b, double z0) {
  const DyadicGrid g = x.grid();
  const double h = g.mesh();
  const double e0 = std::expm1(b * h) / b;
  const double e1 = (std::expm1(b * h) - b * h) / (b * b);
  std::vector<double> z(g.size());
  double integral = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j > 0) integral = std::exp(b * h) * integral + x[j - 1] * e0 + (x[j] - x[j - 1]) / h * e1;
    z[j] = z0 * std::exp(b * g.point(j)) + s * b * integral + s * x[j];
  }
  return z;
}

std::vector<double> black_scholes_oracle(const SampledPath& x, double b, double z0) {
  const DyadicGrid g = x.grid();
  std::vector<double> z(g.size());
  double int_x = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = g.point(j);
    if (j > 0) int_x += 0.5 * g.mesh() * (x[j - 1] + x[j]);
    const double s = 0.2 + 0.1 * t;
    z[j] = z0 * std::exp(b * t - 0.1 * int_x - 0.5 * (s * s * s - 0.008) / 0.3) * std::exp(s * x[j]);
  }
  return z;
}

Outcome ide_oracles() {
  const int n = 12;
  double langevin = 0.0;
  for (const char* name : {"fig1-left", "fig1-right"}) {
    const auto f = preset_sequence(name);
    const SampledPath x = build_x(f, n);
    for (double z0 : {0.0, 1.0}) {
      const IDEProblem p(VolatilityField::constant(1.0), [](double, double xi) { return 0.5 * xi; },
                         BVDriver::time(n), x, analytic_qv_driver(f, QVKind::curved, n), z0);
      langevin = std::max(langevin, sup_abs_diff(solve_ide(p, n).z, langevin_oracle(x, 1.0, 0.5, z0)));
    }
  }
  const auto unit = preset_sequence("unit");
  const SampledPath xu = build_x(unit, n);
  const BVDriver qu = analytic_qv_driver(unit, QVKind::curved, n);
  double bs = 0.0;
  for (double z0 : {1.0, 2.5}) {
    const IDEProblem p(VolatilityField::black_scholes(), [](double, double xi) { return 0.05 * xi; },
                       BVDriver::time(n), xu, qu, z0);
    bs = std::max(bs, sup_abs_diff(solve_ide(p, n).z, black_scholes_oracle(xu, 0.05, z0)));
  }
  double root = 0.0;
  for (double z0 : {-1.0, 0.0, 0.4}) {
    const IDEProblem p(VolatilityField::sqrt1p(), [](double, double xi) { return 0.5 * xi; }, BVDriver::time(n), xu,
                       qu, z0);
    std::vector<double> exact(xu.size());
    for (std::size_t j = 0; j < exact.size(); ++j) exact[j] = std::sinh(xu[j] + std::asinh(z0));
    root = std::max(root, sup_abs_diff(solve_ide(p, n).z, exact));
  }
  SolverOptions fine;
  fine.tonelli_n = std::ldexp(1.0, 24);
  double agree = 0.0;
  const std::vector<IDEProblem> problems{
      IDEProblem(VolatilityField::constant(1.0), [](double, double xi) { return 0.5 * xi; }, BVDriver::time(n), xu,
                 qu, 0.3),
      IDEProblem(VolatilityField::black_scholes(), [](double, double xi) { return 0.05 * xi; }, BVDriver::time(n),
                 xu, qu, 1.0),
      IDEProblem(VolatilityField::sqrt1p(), [](double, double xi) { return 0.5 * xi; }, BVDriver::time(n), xu, qu,
                 0.4)};
  for (const auto& p : problems) {
    const SampledPath a = solve_B(p, Scheme::picard, n);
    const SampledPath b = solve_B(p, Scheme::tonelli, n, fine);
    agree = std::max(agree, sup_abs_diff(a, std::vector<double>(b.values().begin(), b.values().end())));
  }
  return {langevin <= 1e-4 && bs <= 1e-4 && root <= 1e-6 && agree <= 1e-6,
          "Langevin " + fmt(langevin) + ", Black-Scholes " + fmt(bs) + ", square-root " + fmt(root) +
              ", Picard vs Tonelli " + fmt(agree)};
}

// ---- 8 ----
Outcome local_qv() {
  const auto f = preset_sequence("unit");
  std::vector<double> defects, analytic;
  for (int n : {10, 12, 14}) {
    const SampledPath x = build_x(f, n);
    const BVDriver q = analytic_qv_driver(f, QVKind::curved, n);
    const IDEProblem p(VolatilityField::sqrt1p(), [](double, double xi) { return 0.5 * xi; }, BVDriver::time(n), x, q,
                       0.4);
    const SampledPath z = solve_ide(p, n).z;
    defects.push_back(verify_local_qv(z, p.field(), qv_curve(x, n), n));
    analytic.push_back(verify_local_qv(z, p.field(), q, n));
  }
  info("defect against the analytic <x>_t = t: " + join(analytic));
  const bool decreasing = defects[1] < defects[0] && defects[2] < defects[1];
  return {decreasing && defects.back() <= 0.05, "defects n=10,12,14: " + join(defects)};
}

// ---- 9 ----
Outcome shooting() {
  const int n = 12;
  const SampledPath x = build_preset("unit", n);
  double closed = 0.0;
  for (double z0 : {0.0, -1.0}) {
    for (double z1 : {2.0, -0.5}) {
      for (double t0 : {0.25, 1.0}) {
        const auto r = shoot_constant_b(VolatilityField::constant(1.0), x, z0, z1, t0, n);
        closed = std::max(closed, std::abs(r.b - (z1 - z0 - x.at(t0)) / t0));
      }
    }
  }
  const auto sqrt1p = VolatilityField::sqrt1p();
  double worst = shoot_constant_b(sqrt1p, x, 0.0, 2.0, 1.0, n).error;
  double resolve = 0.0;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> target(-3.0, 3.0);
  const double times[] = {0.25, 0.5, 1.0};
  for (int i = 0; i < 10; ++i) {
    const double z1 = target(rng);
    const double t0 = times[i % 3];
    const auto r = shoot_constant_b(sqrt1p, x, 0.0, z1, t0, n);
    worst = std::max(worst, r.error);
    resolve = std::max(resolve, std::abs(terminal_value(sqrt1p, x, 0.0, r.b, t0, n) - z1));
  }
  return {closed <= 1e-9 && worst <= 1e-6 && resolve <= 2e-6,
          "sigma=1 b error " + fmt(closed) + ", sqrt1p |z(t0) - z1| " + fmt(worst) + ", re-solve " + fmt(resolve)};
}

// ---- 10 ----
Outcome nondifferentiability() {
  const double generic[] = {0.1, 0.3, 0.4, 0.6, 0.9};
  const double dyadic[] = {0.0, 0.125, 0.375, 0.5, 0.875};
  double recursion = 0.0, literal = 0.0, min_witness = INFINITY, min_growth = INFINITY;
  std::string generic_peaks;
  for (const char* name : {"unit", "fig1-left"}) {
    const auto f = preset_sequence(name);
    const auto c = x_coefficients(f, 14);
    auto scan = [&](double t, bool witness) {
      const auto q = nondiff_quotients(c, f, t, 14);
      double peak = 0.0;
      for (const auto& s : q) {
        recursion = std::max(recursion, s.recursion_error);
        peak = std::max(peak, std::abs(s.d));
        if (s.n > 0) {
          literal = std::max(literal, std::abs(s.increment - f.term(s.n, s.s) * detail::sqrt2_pow(s.n - 1)));
          if (s.n >= 8 && std::abs(f.limit(t)) >= 0.5) {
            min_growth = std::min(min_growth, std::abs(s.increment) / detail::sqrt2_pow(s.n - 1));
          }
        }
      }
      if (witness && std::abs(f.limit(t)) >= 0.5) min_witness = std::min(min_witness, peak);
      if (!witness) generic_peaks += (generic_peaks.empty() ? "" : ", ") + fmt(peak);
    };
    for (double t : dyadic) scan(t, true);
    for (double t : generic) scan(t, false);
  }
  info("max |d_n| for n <= 14 at t = 0.1, 0.3, 0.4, 0.6, 0.9 (f = 1, then cos): " + generic_peaks);
  info("residual of d_n - d_{n-1} = f_n(s_n) 2^{(n-1)/2} without sign and index shift: " + fmt(literal));
  info("min |d_n - d_{n-1}| / 2^{(n-1)/2} for 8 <= n <= 14 where |f| >= 1/2: " + fmt(min_growth));
  return {recursion <= 1e-10 && min_witness > 100.0,
          "recursion residual " + fmt(recursion) + ", min over dyadic points of max |d_n| " + fmt(min_witness)};
}

// ---- 11 ----
int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path given"};
  const auto dir = std::filesystem::temp_directory_path() / "pathwise_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"synth-y --preset fig2-right --level 12 --out ", "y.csv"},
      {"qv --preset fig1-right --levels 8,10,12 --predicted --out ", "qv.csv"},
      {"shoot --sigma sqrt1p --z0 0 --z1 2 --t0 1 --level 10 --trace ", "trace.csv"},
      {"figures --level 9 --out-dir ", "fig"}};
  int files = 0;
  for (const auto& [args, name] : runs) {
    for (const char* round : {"a", "b"}) {
      const auto out = dir / round / name;
      std::filesystem::create_directories(out.parent_path());
      if (run_cli(cli, args + "\"" + out.string() + "\"") != 0) return {false, "CLI failed: " + args + name};
    }
  }
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto other = dir / "b" / std::filesystem::relative(entry.path(), dir / "a");
    if (slurp(entry.path()) != slurp(other)) return {false, "differs: " + entry.path().filename().string()};
    ++files;
  }
  std::filesystem::remove_all(dir);
  return {files > 0, std::to_string(files) + " CSV files identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double time_limit;
  };
  const std::vector<Criterion> criteria{
      {1, "exact qv = ell1 identity", coefficient_identity, 5.0},
      {2, "curved quadratic variation", curved_qv, 10.0},
      {3, "linear quadratic variation", linear_qv, 0.0},
      {4, "polarization and covariation", polarization, 0.0},
      {5, "Ito formula residual", ito_residuals, 0.0},
      {6, "flow identities", flow_suite, 30.0},
      {7, "closed-form IDE solutions", ide_oracles, 0.0},
      {8, "local quadratic variation", local_qv, 0.0},
      {9, "shooting", shooting, 0.0},
      {10, "difference-quotient recursion", nondifferentiability, 0.0},
      {11, "deterministic CLI output", [&] { return determinism(cli); }, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += " (over the " + fmt(c.time_limit) + " s limit)";
    }
    std::printf("%s criterion %2d: %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
