#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <tuple>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathwise/pathwise.hpp"

namespace {

using namespace pathwise;
using io::format_double;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

bool is_preset(const std::string& name) {
  for (const auto& p : preset_names()) {
    if (p == name) return true;
  }
  return false;
}

/// A path given as a preset name (built at `level`) or a CSV/JSON file.
SampledPath path_source(const std::string& spec, int level) {
  if (is_preset(spec)) return build_preset(spec, level);
  return io::load_path(spec);
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw DomainError("bad level list '" + text + "'");
    }
  }
  if (out.empty()) throw DomainError("empty level list");
  return out;
}

double constant_expression(const std::string& text) {
  const auto e = expr::parse(text);
  if (e.depends_on(expr::Var::t) || e.depends_on(expr::Var::xi) || e.depends_on(expr::Var::n)) {
    throw DomainError("'" + text + "' must be a constant");
  }
  return e(0.0, 0.0);
}

void write_output(const std::string& file, const SampledPath& p) {
  if (file.empty()) {
    io::write_path_csv(std::cout, p);
  } else {
    io::save_path(file, p);
  }
}

std::ofstream open_out(const std::string& file) {
  std::ofstream out(file);
  if (!out) throw DomainError("cannot write '" + file + "'");
  return out;
}

// ---- synth-x / synth-y ----

struct SynthArgs {
  std::string preset;
  std::string f;
  std::string limit;
  std::string alpha = "e";
  std::string out;
  std::string coeffs;
  int level = kDefaultLevel;
};

FunctionSequence synth_sequence(const SynthArgs& a) {
  if (a.preset.empty() == a.f.empty()) throw DomainError("give exactly one of --preset and --f");
  if (!a.preset.empty()) return preset_sequence(a.preset);
  return sequence_from_expression(a.f, a.limit);
}

int run_synth(const SynthArgs& a, bool shifted) {
  const auto f = synth_sequence(a);
  detail::check_level(a.level);
  const FSCoefficients c = shifted ? y_coefficients(f, IrrationalShift(constant_expression(a.alpha)), a.level)
                                   : x_coefficients(f, a.level);
  write_output(a.out, synthesize(c, a.level));
  if (!a.coeffs.empty()) open_out(a.coeffs) << io::coefficients_to_json(c).dump() << '\n';
  return kExitOk;
}

// ---- qv / cov ----

struct QVArgs {
  std::string in;
  std::string preset;
  std::string y;
  std::string levels = "8,10,12";
  std::string out;
  double t = 1.0;
  bool predicted = false;
};

int run_qv(const QVArgs& a, bool covariation) {
  if (a.in.empty() == a.preset.empty()) throw DomainError("give exactly one of --in and --preset");
  const auto levels = parse_levels(a.levels);
  const int finest = *std::max_element(levels.begin(), levels.end());
  const int coarsest = *std::min_element(levels.begin(), levels.end());
  const SampledPath x = a.in.empty() ? build_preset(a.preset, finest) : io::load_path(a.in);
  std::optional<SampledPath> y;
  if (covariation) {
    if (a.y.empty()) throw DomainError("cov needs --y");
    y = path_source(a.y, x.level());
  }
  const bool predicted = a.predicted && !covariation;
  if (predicted && a.preset.empty()) throw DomainError("--predicted needs a preset path");

  std::cout << (covariation ? "level,cov\n" : "level,qv\n");
  std::vector<std::vector<double>> curves;
  for (int n : levels) {
    std::vector<double> curve;
    if (covariation) {
      const CovCurve c = cov_curve(x, *y, n);
      curve.assign(c.values().begin(), c.values().end());
    } else {
      const QVCurve c = qv_curve(x, n);
      curve.assign(c.values().begin(), c.values().end());
    }
    std::cout << n << ',' << format_double(curve[DyadicGrid(n).index_of(a.t)]) << '\n';
    curves.push_back(curve);
  }
  if (predicted) {
    std::cout << "predicted," << format_double(predicted_qv(preset_sequence(a.preset), preset_kind(a.preset), a.t))
              << '\n';
  }
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    out << 't';
    for (int n : levels) out << (covariation ? ",cov_n" : ",qv_n") << n;
    if (predicted) out << ",predicted";
    out << '\n';
    const DyadicGrid grid(coarsest);
    const auto f = predicted ? std::optional(preset_sequence(a.preset)) : std::nullopt;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid.point(k);
      out << format_double(t);
      for (std::size_t i = 0; i < levels.size(); ++i) {
        out << ',' << format_double(curves[i][DyadicGrid(levels[i]).index_of(t)]);
      }
      if (predicted) out << ',' << format_double(predicted_qv(*f, preset_kind(a.preset), t));
      out << '\n';
    }
  }
  return kExitOk;
}

// ---- integrate ----

struct IntegrateArgs {
  std::string eta;
  std::string x;
  std::string out;
  int level = kDefaultLevel;
  int n = -1;
};

int run_integrate(const IntegrateArgs& a) {
  const SampledPath x = path_source(a.x, a.level);
  const int n = a.n < 0 ? x.level() : a.n;
  const auto g = expr::parse(a.eta);
  const SampledPath eta = integrand_trace(x, [&](double t, double v) { return g(t, v); });
  const DyadicGrid grid(n);
  std::vector<double> running(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) running[k] = follmer_integral(eta, x, n, grid.point(k));
  std::cout << "integral," << format_double(running.back()) << '\n';
  if (!a.out.empty()) io::save_path(a.out, SampledPath(n, std::move(running)));
  return kExitOk;
}

// ---- ito-check ----

struct ItoArgs {
  std::string F = "xi^3";
  std::string x = "fig1-left";
  std::string levels = "8,10,12,14";
  int level = 14;
};

ScalarMap scalar_map(const std::string& name) {
  if (name == "xi^2" || name == "ξ^2" || name == "square") return ScalarMap::square();
  if (name == "xi^3" || name == "ξ^3" || name == "cube") return ScalarMap::cube();
  if (name == "exp") return ScalarMap::exponential();
  throw DomainError("unknown F '" + name + "' (xi^2, xi^3 or exp)");
}

int run_ito(const ItoArgs& a) {
  const ScalarMap F = scalar_map(a.F);
  const auto levels = parse_levels(a.levels);
  const int finest = *std::max_element(levels.begin(), levels.end());
  const SampledPath x = path_source(a.x, std::max(a.level, finest));
  std::cout << "level,sup_residual,residual_at_1\n";
  for (int n : levels) {
    const DyadicGrid grid(n);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) worst = std::max(worst, std::abs(ito_residual(F, x, n, grid.point(k))));
    std::cout << n << ',' << format_double(worst) << ',' << format_double(ito_residual(F, x, n, 1.0)) << '\n';
  }
  return kExitOk;
}

// ---- flow-check ----

struct FlowArgs {
  std::string field = "sqrt1p";
  int samples = 50;
  std::uint64_t seed = 1;
};

int run_flow_check(const FlowArgs& a) {
  const VolatilityField f = field_by_name(a.field);
  const FieldCheck fc = check_field(f);
  const FlowIdentityReport r = flow_identity_suite(f, a.samples, a.seed);
  std::cout << "check,value,limit\n";
  std::cout << "field_partials," << format_double(std::max(fc.worst_sigma_xi, fc.worst_sigma_t)) << ",1e-4\n";
  std::cout << "semigroup," << format_double(r.semigroup) << ",1e-8\n";
  std::cout << "time_derivative," << format_double(r.time_derivative) << ",1e-7\n";
  std::cout << "second_order," << format_double(r.second_order) << ",1e-5\n";
  std::cout << "d_xi_fd," << format_double(r.d_xi_fd) << ",1e-5\n";
  std::cout << "d_tau_fd," << format_double(r.d_tau_fd) << ",1e-5\n";
  std::cout << "d_xi_min," << format_double(r.d_xi_min) << ",0\n";
  const bool ok = fc.ok && r.semigroup <= 1e-8 && r.time_derivative <= 1e-7 && r.second_order <= 1e-5 &&
                  r.d_xi_fd <= 1e-5 && r.d_tau_fd <= 1e-5 && r.d_xi_min > 0.0 && r.d_xi_within_bounds;
  if (!ok) {
    std::cerr << "flow identities violated for field '" << f.name << "'\n";
    return kExitNumerical;
  }
  return kExitOk;
}

// ---- solve ----

struct SolveArgs {
  std::string problem;
  std::string out;
  std::string scheme = "picard";
};

std::string json_text(const nlohmann::json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (j.at(key).is_number()) return format_double(j.at(key).get<double>());
  if (!j.at(key).is_string()) throw DomainError(std::string("\"") + key + "\" must be a string or number");
  return j.at(key).get<std::string>();
}

int run_solve(const SolveArgs& a) {
  std::ifstream in(a.problem);
  if (!in) throw DomainError("cannot open '" + a.problem + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("'" + a.problem + "': " + e.what());
  }
  const int level = j.value("level", kDefaultLevel);
  const std::string x_spec = json_text(j, "x", "unit");
  const SampledPath x = path_source(x_spec, level);
  const VolatilityField field = field_by_name(json_text(j, "sigma", "1"));
  const Drift drift = drift_from_expression(json_text(j, "b", "0"));
  const std::string a_spec = json_text(j, "A", "t");
  const BVDriver driver_a = a_spec == "t" ? BVDriver::time(x.level()) : BVDriver(io::load_path(a_spec));
  const std::string qv_mode = json_text(j, "qv", is_preset(x_spec) ? "analytic" : "empirical");
  BVDriver qv = [&] {
    if (qv_mode == "analytic") {
      if (!is_preset(x_spec)) throw DomainError("analytic <x> needs a preset path");
      return analytic_qv_driver(preset_sequence(x_spec), preset_kind(x_spec), x.level());
    }
    if (qv_mode == "empirical") return qv_curve(x, x.level()).as_driver();
    throw DomainError("\"qv\" must be \"analytic\" or \"empirical\"");
  }();
  if (!j.contains("z0") || !j.at("z0").is_number()) throw DomainError("problem needs a numeric \"z0\"");
  const IDEProblem p(field, drift, driver_a, x, qv, j.at("z0").get<double>());

  SolverOptions opt;
  SampledPath B(0, {0.0, 0.0});
  SampledPath z(0, {0.0, 0.0});
  double report = 0.0;
  if (a.scheme == "picard") {
    IDESolution s = solve_ide(p, level, opt);
    B = std::move(s.B);
    z = std::move(s.z);
    report = s.residual_report;
  } else if (a.scheme == "tonelli") {
    B = solve_B(p, Scheme::tonelli, level, opt);
    const SampledPath xs = restrict(x, level);
    const DyadicGrid grid(level);
    std::vector<double> zv(grid.size());
    for (std::size_t k = 0; k < zv.size(); ++k) zv[k] = flow(field, grid.point(k), B[k], xs[k], opt.flow);
    z = SampledPath(level, std::move(zv));
  } else {
    throw DomainError("--scheme must be picard or tonelli");
  }
  std::cout << "z(1)," << format_double(z.back()) << '\n';
  std::cout << "picard_defect," << format_double(report) << '\n';
  std::cout << "follmer_defect," << format_double(follmer_defect(p, z)) << '\n';
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    out << "t,B,z\n";
    const DyadicGrid grid(level);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out << format_double(grid.point(k)) << ',' << format_double(B[k]) << ',' << format_double(z[k]) << '\n';
    }
  }
  return kExitOk;
}

// ---- shoot ----

struct ShootArgs {
  std::string sigma = "sqrt1p";
  std::string x;
  std::string preset = "unit";
  std::string trace;
  double z0 = 0.0;
  double z1 = 0.0;
  double t0 = 1.0;
  double tol = 1e-6;
  int level = kDefaultLevel;
};

int run_shoot(const ShootArgs& a) {
  const SampledPath x = a.x.empty() ? build_preset(a.preset, a.level) : io::load_path(a.x);
  ShootOptions opt;
  opt.tolerance = a.tol;
  const VolatilityField field = field_by_name(a.sigma);
  ShootResult r;
  try {
    r = shoot_constant_b(field, x, a.z0, a.z1, a.t0, a.level, opt);
  } catch (const NumericalError& e) {
    std::cerr << "shooting failed: " << e.what() << '\n';
    return kExitNumerical;
  }
  std::cout << "b," << format_double(r.b) << '\n';
  std::cout << "z(t0)," << format_double(r.z_at_t0) << '\n';
  std::cout << "error," << format_double(r.error) << '\n';
  if (!a.trace.empty()) {
    auto out = open_out(a.trace);
    out << "iteration,b,z_b(t0)\n";
    for (const auto& s : r.trace) out << s.iteration << ',' << format_double(s.b) << ',' << format_double(s.z_at_t0) << '\n';
  }
  return r.error <= a.tol ? kExitOk : kExitNumerical;
}

// ---- match ----

struct MatchArgs {
  std::string target;
  std::string derivative;
  std::string sigma = "bs";
  std::string x = "unit";
  std::string out;
  int level = 14;
  double tol = -1.0;
};

int run_match(const MatchArgs& a) {
  const auto target = expr::parse(a.target);
  const SampledPath tb = SampledPath::from_function(a.level, [&](double t) { return target(t, 0.0); });
  std::optional<SampledPath> db;
  if (!a.derivative.empty()) {
    const auto d = expr::parse(a.derivative);
    db = SampledPath::from_function(a.level, [&](double t) { return d(t, 0.0); });
  }
  const SampledPath x = path_source(a.x, a.level);
  const MatchResult r = match_path(tb, db, field_by_name(a.sigma), x, a.level);
  std::cout << "sup_error," << format_double(r.sup_error) << '\n';
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    out << "t,b,target_z,solved_z\n";
    const DyadicGrid grid(a.level);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out << format_double(grid.point(k)) << ',' << format_double(r.drift[k]) << ',' << format_double(r.target_z[k])
          << ',' << format_double(r.solved_z[k]) << '\n';
    }
  }
  if (a.tol >= 0.0 && r.sup_error > a.tol) {
    std::cerr << "matched path misses the target by " << format_double(r.sup_error) << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

// ---- diagnose ----

struct DiagnoseArgs {
  std::string f = "unit";
  double t = 0.1;
  int n_max = 14;
  double eps = 0.5;
};

int run_diagnose(const DiagnoseArgs& a) {
  const FunctionSequence f = sequence_by_name(a.f);
  const FSCoefficients c = x_coefficients(f, std::max(a.n_max, 1));
  std::cout << "n,s_n,d_n,increment,predicted,recursion_error,diverging\n";
  for (const auto& s : nondiff_quotients(c, f, a.t, a.n_max, a.eps)) {
    std::cout << s.n << ',' << format_double(s.s) << ',' << format_double(s.d) << ',' << format_double(s.increment)
              << ',' << format_double(s.predicted) << ',' << format_double(s.recursion_error) << ','
              << (s.diverging ? 1 : 0) << '\n';
  }
  return kExitOk;
}

// ---- figures ----

struct FiguresArgs {
  std::string out_dir = ".";
  int level = 12;
};

void write_figure(const std::filesystem::path& dir, const std::string& stem, const SampledPath& p,
                  const FunctionSequence& f, QVKind kind) {
  auto out = open_out((dir / (stem + ".csv")).string());
  io::write_path_csv(out, p, "t,value");
  auto q = open_out((dir / (stem + "-qv.csv")).string());
  q << "t,qv_n7,predicted\n";
  const QVCurve c = qv_curve(p, 7);
  const DyadicGrid grid(7);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    q << format_double(grid.point(k)) << ',' << format_double(c[k]) << ','
      << format_double(predicted_qv(f, kind, grid.point(k))) << '\n';
  }
}

int run_figures(const FiguresArgs& a) {
  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  for (const char* name : {"fig1-left", "fig1-right"}) {
    const auto f = preset_sequence(name);
    write_figure(dir, name, build_x(f, a.level), f, QVKind::curved);
  }
  const std::pair<const char*, double> alphas[] = {{"e", std::numbers::e}, {"10e", 10 * std::numbers::e}};
  for (const char* name : {"fig2-left", "fig2-right"}) {
    const auto f = preset_sequence(name);
    for (const auto& [label, alpha] : alphas) {
      write_figure(dir, std::string(name) + "-alpha-" + label, build_y(f, IrrationalShift(alpha), a.level), f,
                   QVKind::linear);
    }
  }
  std::cout << "wrote figure data to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathwise Ito calculus on dyadic partitions"};
  app.require_subcommand(1, 1);

  SynthArgs sx, sy;
  for (const auto& [cmd, args, shifted] : {std::tuple{"synth-x", &sx, false}, std::tuple{"synth-y", &sy, true}}) {
    auto* s = app.add_subcommand(cmd, shifted ? "Synthesize y_alpha^f" : "Synthesize x_f");
    s->add_option("--preset", args->preset, "Preset sequence name");
    s->add_option("--f", args->f, "Expression f_n(t) in t and n");
    s->add_option("--limit", args->limit, "Expression for the limit f(t)");
    s->add_option("--level", args->level, "Grid level");
    s->add_option("--out", args->out, "Output file (.csv or .json); stdout if omitted");
    s->add_option("--coeffs", args->coeffs, "Also write the coefficients as JSON");
    if (shifted) s->add_option("--alpha", args->alpha, "Rotation number (constant expression)");
  }

  QVArgs qa, ca;
  for (const auto& [cmd, args] : {std::pair{"qv", &qa}, std::pair{"cov", &ca}}) {
    const bool cov = std::string(cmd) == "cov";
    auto* s = app.add_subcommand(cmd, cov ? "Level-n covariation" : "Level-n quadratic variation");
    s->add_option("--in", args->in, "Path file");
    s->add_option("--preset", args->preset, "Preset path");
    if (cov) s->add_option("--y", args->y, "Second path (preset or file)")->required();
    s->add_option("--levels", args->levels, "Comma-separated levels");
    s->add_option("--t", args->t, "Grid point to report");
    s->add_option("--out", args->out, "CSV of the curves on the coarsest grid");
    if (!cov) s->add_flag("--predicted", args->predicted, "Also report the limit");
  }

  IntegrateArgs ia;
  auto* integrate = app.add_subcommand("integrate", "Foellmer integral of g(t, x(t)) against x");
  integrate->add_option("--eta", ia.eta, "Integrand expression in t and xi")->required();
  integrate->add_option("--x", ia.x, "Integrator (preset or file)")->required();
  integrate->add_option("--level", ia.level, "Level for preset paths");
  integrate->add_option("--n", ia.n, "Partition level (default: path level)");
  integrate->add_option("--out", ia.out, "Running integral");

  ItoArgs ita;
  auto* ito = app.add_subcommand("ito-check", "Residual of the pathwise Ito formula");
  ito->add_option("--F", ita.F, "xi^2, xi^3 or exp");
  ito->add_option("--x", ita.x, "Path (preset or file)");
  ito->add_option("--levels", ita.levels, "Comma-separated levels");
  ito->add_option("--level", ita.level, "Level for preset paths");

  FlowArgs fa;
  auto* flow_check = app.add_subcommand("flow-check", "Flow identity suite for a field");
  flow_check->add_option("--field", fa.field, "sqrt1p, bs or an expression in t and xi");
  flow_check->add_option("--samples", fa.samples, "Random sample count");
  flow_check->add_option("--seed", fa.seed, "Sampler seed");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve an integral differential equation from a JSON problem");
  solve->add_option("--problem", sa.problem, "Problem JSON")->required();
  solve->add_option("--out", sa.out, "CSV t,B,z");
  solve->add_option("--scheme", sa.scheme, "picard or tonelli");

  ShootArgs sha;
  auto* shoot = app.add_subcommand("shoot", "Constant drift steering z0 to z1 at t0");
  shoot->add_option("--sigma", sha.sigma, "Field");
  shoot->add_option("--x", sha.x, "Path file");
  shoot->add_option("--preset", sha.preset, "Preset path when --x is absent");
  shoot->add_option("--z0", sha.z0, "Initial value");
  shoot->add_option("--z1", sha.z1, "Target value")->required();
  shoot->add_option("--t0", sha.t0, "Target time");
  shoot->add_option("--level", sha.level, "Solver level");
  shoot->add_option("--tol", sha.tol, "Target tolerance");
  shoot->add_option("--trace", sha.trace, "CSV trace iteration,b,z_b(t0)");

  MatchArgs ma;
  auto* match = app.add_subcommand("match", "Drift b(t) reproducing a target B");
  match->add_option("--target", ma.target, "Target B(t) expression")->required();
  match->add_option("--derivative", ma.derivative, "B'(t) expression");
  match->add_option("--sigma", ma.sigma, "Field");
  match->add_option("--x", ma.x, "Path (preset or file)");
  match->add_option("--level", ma.level, "Solver level");
  match->add_option("--tol", ma.tol, "Fail when the sup-error exceeds this");
  match->add_option("--out", ma.out, "CSV t,b,target_z,solved_z");

  DiagnoseArgs da;
  auto* diagnose = app.add_subcommand("diagnose", "Dyadic difference quotients of x_f");
  diagnose->add_option("--f", da.f, "Preset or expression f_n(t)");
  diagnose->add_option("--t", da.t, "Point in [0, 1)");
  diagnose->add_option("--n-max", da.n_max, "Largest level");
  diagnose->add_option("--eps", da.eps, "Divergence threshold");

  FiguresArgs fga;
  auto* figures = app.add_subcommand("figures", "Preset paths and their level-7 QV curves as CSV");
  figures->add_option("--out-dir", fga.out_dir, "Output directory");
  figures->add_option("--level", fga.level, "Path level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("synth-x")) return run_synth(sx, false);
    if (app.got_subcommand("synth-y")) return run_synth(sy, true);
    if (app.got_subcommand("qv")) return run_qv(qa, false);
    if (app.got_subcommand("cov")) return run_qv(ca, true);
    if (app.got_subcommand(integrate)) return run_integrate(ia);
    if (app.got_subcommand(ito)) return run_ito(ita);
    if (app.got_subcommand(flow_check)) return run_flow_check(fa);
    if (app.got_subcommand(solve)) return run_solve(sa);
    if (app.got_subcommand(shoot)) return run_shoot(sha);
    if (app.got_subcommand(match)) return run_match(ma);
    if (app.got_subcommand(diagnose)) return run_diagnose(da);
    if (app.got_subcommand(figures)) return run_figures(fga);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    for (std::size_t i = 0; i < e.trace().size(); ++i) {
      std::cerr << "  step " << i << " defect " << format_double(e.trace()[i]) << '\n';
    }
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
