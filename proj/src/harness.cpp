#include "kfdg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "kfdg/errors.hpp"
#include "kfdg/kfvs_ns.hpp"

namespace kfdg::harness {

namespace fs = std::filesystem;
using std::numbers::pi;

std::string fmt(double v, int digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

namespace {

/// Value and physical derivative of some discrete quantity at (element, xi).
using PointEval = std::function<std::pair<double, double>(int, double)>;

ErrorNorms norms_of(const Mesh1D& mesh, int n_points, const PointEval& fh, const ScalarFunction& exact,
                    const ScalarFunction& exact_dx) {
  const auto q = gauss_quadrature(n_points);
  double l2 = 0.0, h1 = 0.0;
  for (int e = 0; e < mesh.n_elements; ++e) {
    const double h = mesh.element_size(e);
    const double xc = mesh.center(e);
    for (int p = 0; p < q.size(); ++p) {
      const double x = xc + 0.5 * h * q.nodes[p];
      const auto [v, d] = fh(e, q.nodes[p]);
      const double ev = v - exact(x);
      const double ed = d - exact_dx(x);
      l2 += 0.5 * h * q.weights[p] * ev * ev;
      h1 += 0.5 * h * q.weights[p] * ed * ed;
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_scalar(Problem p) {
  return p == Problem::Convection || p == Problem::ConvectionDiffusion || p == Problem::Test3;
}

struct Defaults {
  double x_min, x_max, mu, t_final, gamma, cfl;
};

Defaults problem_defaults(Problem p, int degree) {
  const double rk = 0.9 / (2 * degree + 1);
  switch (p) {
    case Problem::Convection: return {-1.0, 1.0, 0.0, 2.0, 1.4, rk};
    case Problem::ConvectionDiffusion: return {-1.0, 1.0, 1.0, 0.5, 1.4, rk};
    case Problem::Test3: return {0.0, 4.0, 0.005, 1.0, 1.4, rk};
    case Problem::Euler: return {0.0, 1.0, 0.0, 1.0, 1.4, rk};
    case Problem::NsMms: return {0.0, 1.0, 0.01, 0.0, 1.4, 5.0};
    case Problem::NsShock: return {-0.125, 0.125, 0.0005, 0.0, 5.0 / 3.0, 5.0};
  }
  return {-1.0, 1.0, 0.0, 0.0, 1.4, rk};
}

double pick(double v, double fallback) { return std::isnan(v) ? fallback : v; }

/// Copy with every unset field replaced by the problem default.
RunConfig resolve(const RunConfig& in) {
  RunConfig c = in;
  const auto d = problem_defaults(c.problem, c.degree);
  c.x_min = pick(c.x_min, d.x_min);
  c.x_max = pick(c.x_max, d.x_max);
  c.mu = pick(c.mu, d.mu);
  c.t_final = pick(c.t_final, d.t_final);
  c.gamma = pick(c.gamma, d.gamma);
  if (!(c.cfl > 0.0)) c.cfl = d.cfl;
  return c;
}

}  // namespace

ErrorNorms error_norms(const DGField& u, const ScalarFunction& exact, const ScalarFunction& exact_dx,
                       int component, int extra_points) {
  const int n_points = u.basis().degree() + 3 + std::max(0, extra_points);
  return norms_of(
      u.mesh(), n_points,
      [&](int e, double xi) {
        return std::make_pair(u.value(e, xi, component), u.derivative(e, xi, component));
      },
      exact, exact_dx);
}

double eoc(double e_coarse, double e_fine, double ratio) {
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

Problem parse_problem(const std::string& name) {
  if (name == "convection") return Problem::Convection;
  if (name == "convection_diffusion") return Problem::ConvectionDiffusion;
  if (name == "test3") return Problem::Test3;
  if (name == "euler") return Problem::Euler;
  if (name == "ns_mms") return Problem::NsMms;
  if (name == "ns_shock") return Problem::NsShock;
  throw ConfigError("problem", "unknown problem '" + name +
                                   "' (expected convection, convection_diffusion, test3, euler, ns_mms, ns_shock)");
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::Convection: return "convection";
    case Problem::ConvectionDiffusion: return "convection_diffusion";
    case Problem::Test3: return "test3";
    case Problem::Euler: return "euler";
    case Problem::NsMms: return "ns_mms";
    case Problem::NsShock: return "ns_shock";
  }
  return "?";
}

// ---------------------------------------------------------------- config

std::vector<std::string> config_keys() {
  return {"problem",  "cells",   "degree",     "variant",    "cip",        "beta",      "c",
          "mu",       "t_final", "cfl",        "x_min",      "x_max",      "gamma",     "gas_r",
          "prandtl",  "mach",    "mu_power",   "steady_tol", "max_steps",  "cfl_growth", "stall_window", "plot_points",
          "output_dir", "sweep_cells"};
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "problem") cfg.problem = parse_problem(value);
  else if (key == "cells") cfg.cells = parse_int(key, value);
  else if (key == "degree") cfg.degree = parse_int(key, value);
  else if (key == "variant") {
    try {
      scalar::parse_variant(value);
    } catch (const InvalidArgument& e) {
      throw ConfigError(key, e.what());
    }
    cfg.variant = value;
  } else if (key == "cip") cfg.cip = parse_double(key, value);
  else if (key == "beta") cfg.beta = parse_double(key, value);
  else if (key == "c") cfg.c = parse_double(key, value);
  else if (key == "mu") cfg.mu = parse_double(key, value);
  else if (key == "t_final") cfg.t_final = parse_double(key, value);
  else if (key == "cfl") cfg.cfl = parse_double(key, value);
  else if (key == "x_min") cfg.x_min = parse_double(key, value);
  else if (key == "x_max") cfg.x_max = parse_double(key, value);
  else if (key == "gamma") cfg.gamma = parse_double(key, value);
  else if (key == "gas_r") cfg.gas_r = parse_double(key, value);
  else if (key == "prandtl") cfg.prandtl = parse_double(key, value);
  else if (key == "mach") cfg.mach = parse_double(key, value);
  else if (key == "mu_power") cfg.mu_power = parse_double(key, value);
  else if (key == "steady_tol") cfg.steady_tol = parse_double(key, value);
  else if (key == "max_steps") cfg.max_steps = parse_int(key, value);
  else if (key == "cfl_growth") cfg.cfl_growth = parse_double(key, value);
  else if (key == "stall_window") cfg.stall_window = parse_int(key, value);
  else if (key == "plot_points") cfg.plot_points = parse_int(key, value);
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "sweep_cells") {
    cfg.sweep_cells.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.sweep_cells.push_back(parse_int(key, trim(item)));
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  auto num = [&](const char* k, double v) {
    if (!std::isnan(v)) os << k << " = " << std::setprecision(17) << v << '\n';
  };
  os << "problem = " << to_string(cfg.problem) << '\n';
  os << "cells = " << cfg.cells << '\n';
  os << "degree = " << cfg.degree << '\n';
  os << "variant = " << cfg.variant << '\n';
  num("cip", cfg.cip);
  num("beta", cfg.beta);
  num("c", cfg.c);
  num("mu", cfg.mu);
  num("t_final", cfg.t_final);
  num("cfl", cfg.cfl);
  num("x_min", cfg.x_min);
  num("x_max", cfg.x_max);
  num("gamma", cfg.gamma);
  num("gas_r", cfg.gas_r);
  num("prandtl", cfg.prandtl);
  num("mach", cfg.mach);
  num("mu_power", cfg.mu_power);
  num("steady_tol", cfg.steady_tol);
  os << "max_steps = " << cfg.max_steps << '\n';
  num("cfl_growth", cfg.cfl_growth);
  os << "stall_window = " << cfg.stall_window << '\n';
  os << "plot_points = " << cfg.plot_points << '\n';
  if (!cfg.sweep_cells.empty()) {
    os << "sweep_cells = ";
    for (std::size_t i = 0; i < cfg.sweep_cells.size(); ++i) os << (i ? "," : "") << cfg.sweep_cells[i];
    os << '\n';
  }
  if (!cfg.output_dir.empty()) os << "output_dir = " << cfg.output_dir << '\n';
  return os.str();
}

void RunConfig::validate() const {
  const auto c = resolve(*this);
  if (c.cells < 1) throw ConfigError("cells", "must be at least 1");
  if (c.degree < 0 || c.degree > 8) throw ConfigError("degree", "must be between 0 and 8");
  try {
    scalar::parse_variant(c.variant);
  } catch (const InvalidArgument& e) {
    throw ConfigError("variant", e.what());
  }
  if (!(c.cip >= 0.0)) throw ConfigError("cip", "must be non-negative");
  if (c.variant == "sipg" && !(c.cip > 0.0)) throw ConfigError("cip", "sipg requires a positive penalty");
  if (!(c.beta > 0.0)) throw ConfigError("beta", "must be positive");
  if (!(c.mu >= 0.0)) throw ConfigError("mu", "must be non-negative");
  if (c.problem == Problem::Convection && c.mu != 0.0) throw ConfigError("mu", "pure convection has mu = 0");
  if (!(c.t_final >= 0.0)) throw ConfigError("t_final", "must be non-negative");
  if (!(c.cfl > 0.0)) throw ConfigError("cfl", "must be positive");
  if (!(c.x_max > c.x_min)) throw ConfigError("x_max", "must exceed x_min");
  if (!(c.gamma > 1.0)) throw ConfigError("gamma", "must exceed 1");
  if (!(c.gas_r > 0.0)) throw ConfigError("gas_r", "must be positive");
  if (!(c.prandtl > 0.0)) throw ConfigError("prandtl", "must be positive");
  if (c.problem == Problem::NsShock && !(c.mach > 1.0)) throw ConfigError("mach", "must exceed 1");
  if (c.problem == Problem::NsShock && !(c.mu > 0.0)) throw ConfigError("mu", "shock viscosity must be positive");
  if (!(c.steady_tol > 0.0)) throw ConfigError("steady_tol", "must be positive");
  if (c.max_steps < 1) throw ConfigError("max_steps", "must be at least 1");
  if (!(c.cfl_growth >= 1.0)) throw ConfigError("cfl_growth", "must be at least 1");
  if (c.stall_window < 0) throw ConfigError("stall_window", "must be non-negative");
  if (c.plot_points < 2) throw ConfigError("plot_points", "must be at least 2");
  for (int n : c.sweep_cells)
    if (n < 1) throw ConfigError("sweep_cells", "entries must be positive");
}

double RunConfig::effective_cfl() const { return resolve(*this).cfl; }

// ---------------------------------------------------------------- scalar runs

double scalar_exact(const RunConfig& in, double x, double t) {
  const auto cfg = resolve(in);
  if (cfg.problem == Problem::Test3) return reference::exact_test3(x, t, cfg.c, cfg.mu);
  return reference::exact_convdiff(x, t, cfg.c, cfg.mu);
}

double scalar_exact_dx(const RunConfig& in, double x, double t) {
  const auto cfg = resolve(in);
  if (cfg.problem == Problem::Test3) return reference::exact_test3_dx(x, t, cfg.c, cfg.mu);
  return reference::exact_convdiff_dx(x, t, cfg.c, cfg.mu);
}

namespace {

double exact_energy(const RunConfig& cfg, const Mesh1D& mesh, double t) {
  const auto q = gauss_quadrature(12);
  double s = 0.0;
  for (int e = 0; e < mesh.n_elements; ++e) {
    const double h = mesh.element_size(e);
    for (int p = 0; p < q.size(); ++p) {
      const double v = scalar_exact(cfg, mesh.center(e) + 0.5 * h * q.nodes[p], t);
      s += 0.5 * h * q.weights[p] * v * v;
    }
  }
  return 0.5 * s;
}

}  // namespace

ScalarRun run_scalar(const RunConfig& in) {
  in.validate();
  const auto cfg = resolve(in);
  if (!is_scalar(cfg.problem)) throw ConfigError("problem", "not a scalar problem");
  const auto mesh = build_uniform_mesh(cfg.x_min, cfg.x_max, cfg.cells, true);
  const Basis basis(cfg.degree);
  scalar::SchemeConfig sc;
  sc.variant = scalar::parse_variant(cfg.variant);
  sc.penalty = cfg.cip;
  sc.kinetics = {cfg.c, cfg.beta, cfg.mu};
  sc.validate();

  ScalarRun run{project([&](double x) { return scalar_exact(cfg, x, 0.0); }, mesh, basis), {}, {}, 0, 0.0, 0.0};
  const auto op = scalar::LinearOperator::compile(mesh, basis, sc);
  std::vector<double> u(run.solution.coefficients().begin(), run.solution.coefficients().end());
  const time::Rhs rhs = [&op](std::span<const double> a, std::span<double> out) { op.apply(a, out); };

  double dt = time::compute_dt_scalar(mesh.h(), cfg.c, cfg.mu, cfg.cfl);
  const int n_steps = cfg.t_final > 0.0 ? static_cast<int>(std::ceil(cfg.t_final / dt - 1e-9)) : 0;
  dt = n_steps > 0 ? cfg.t_final / n_steps : 0.0;
  const int every = std::max(1, n_steps / 1000);

  auto record = [&](double t) {
    std::copy(u.begin(), u.end(), run.solution.coefficients().begin());
    run.energy.push_back({t, scalar::energy(run.solution)});
  };
  record(0.0);
  for (int s = 1; s <= n_steps; ++s) {
    time::rk3_step(u, dt, rhs);
    if (s % every == 0 || s == n_steps) record(s * dt);
  }
  std::copy(u.begin(), u.end(), run.solution.coefficients().begin());
  run.steps = n_steps;
  run.dt = dt;
  run.t_final = cfg.t_final;
  run.errors = error_norms(
      run.solution, [&](double x) { return scalar_exact(cfg, x, cfg.t_final); },
      [&](double x) { return scalar_exact_dx(cfg, x, cfg.t_final); });
  return run;
}

// ---------------------------------------------------------------- gas runs

namespace {

gas::GasModel gas_model(const RunConfig& cfg) {
  gas::GasModel g;
  g.gamma = cfg.gamma;
  g.R = cfg.gas_r;
  g.prandtl = cfg.prandtl;
  if (cfg.problem == Problem::NsShock)
    g.viscosity = gas::ViscosityLaw::power(cfg.mu, 1.0, cfg.mu_power);
  else
    g.viscosity = gas::ViscosityLaw::constant(cfg.mu);
  return g;
}

reference::ShockSetup shock_setup(const RunConfig& cfg) {
  reference::ShockSetup s;
  s.mach = cfg.mach;
  s.gamma = cfg.gamma;
  s.prandtl = cfg.prandtl;
  s.omega = cfg.mu_power;
  s.mu1 = cfg.mu;
  s.R = cfg.gas_r;
  return s;
}

/// Smooth periodic density wave carried by a uniform flow.
gas::Primitive euler_exact(double x, double t) { return {1.0 + 0.2 * std::sin(2.0 * pi * (x - t)), 1.0, 1.0 / (1.0 + 0.2 * std::sin(2.0 * pi * (x - t)))}; }

std::pair<double, double> velocity_at(const DGField& U, const gas::GasModel& g, int e, double xi) {
  gas::Vec3 u, ux;
  for (int c = 0; c < 3; ++c) {
    u[c] = U.value(e, xi, c);
    ux[c] = U.derivative(e, xi, c);
  }
  const auto w = gas::conserved_to_primitive(u, g);
  return {w.u, gas::gradient_from_conserved(u, ux, g).u_x};
}

std::pair<double, double> temperature_at(const DGField& U, const gas::GasModel& g, int e, double xi) {
  gas::Vec3 u, ux;
  for (int c = 0; c < 3; ++c) {
    u[c] = U.value(e, xi, c);
    ux[c] = U.derivative(e, xi, c);
  }
  const auto w = gas::conserved_to_primitive(u, g);
  return {w.T, gas::gradient_from_conserved(u, ux, g).T_x};
}

}  // namespace

ns::NSSchemeConfig ns_scheme(const RunConfig& in) {
  const auto cfg = resolve(in);
  ns::NSSchemeConfig s;
  s.variant = scalar::parse_variant(cfg.variant);
  s.penalty = cfg.cip;
  s.gas = gas_model(cfg);
  switch (cfg.problem) {
    case Problem::Euler:
      s.viscous = false;
      break;
    case Problem::NsMms: {
      s.left = ns::BoundaryOperator::adiabatic_wall();
      s.right = ns::BoundaryOperator::adiabatic_wall();
      const auto g = s.gas;
      s.source = [g](double x) { return ns::mms_source(x, g); };
      break;
    }
    case Problem::NsShock: {
      const auto setup = shock_setup(cfg);
      s.left = ns::BoundaryOperator::far_field(setup.upstream());
      s.right = ns::BoundaryOperator::far_field(
          reference::rankine_hugoniot(setup.mach, setup.gamma, setup.upstream(), setup.R));
      break;
    }
    default:
      throw ConfigError("problem", "not a gas dynamics problem");
  }
  return s;
}

NsRun run_ns(const RunConfig& in) {
  in.validate();
  const auto cfg = resolve(in);
  if (is_scalar(cfg.problem)) throw ConfigError("problem", "not a gas dynamics problem");
  const auto scheme = ns_scheme(cfg);
  const auto& g = scheme.gas;
  const bool periodic = cfg.problem == Problem::Euler;
  const auto mesh = build_uniform_mesh(cfg.x_min, cfg.x_max, cfg.cells, periodic);
  const Basis basis(cfg.degree);

  NsRun run{DGField(mesh, basis, 3), {}, {}, {}, {}, std::nullopt};
  if (cfg.problem == Problem::Euler) {
    run.solution = project(
        [&](double x, std::span<double> out) {
          const auto U = gas::primitive_to_conserved(euler_exact(x, 0.0), g);
          std::copy(U.begin(), U.end(), out.begin());
        },
        mesh, basis, 3);
  } else if (cfg.problem == Problem::NsMms) {
    run.solution = ns::mms_projection(mesh, basis, g);
  } else {
    const auto setup = shock_setup(cfg);
    run.profile = reference::ShockProfile::compute(setup);
    const auto up = setup.upstream();
    const auto down = run.profile->downstream();
    // Rankine-Hugoniot step at x = 0; the viscous layer forms during the march
    run.solution = project(
        [&](double x, std::span<double> out) {
          const auto U = gas::primitive_to_conserved(x < 0.0 ? up : down, g);
          std::copy(U.begin(), U.end(), out.begin());
        },
        mesh, basis, 3);
  }

  std::vector<double> u(run.solution.coefficients().begin(), run.solution.coefficients().end());
  DGField work(mesh, basis, 3);
  const time::Rhs rhs = [&](std::span<const double> a, std::span<double> out) {
    std::copy(a.begin(), a.end(), work.coefficients().begin());
    ns::assemble_ns_rhs(work, scheme, out);
  };

  if (cfg.problem == Problem::Euler) {
    double t = 0.0;
    int steps = 0;
    while (t < cfg.t_final - 1e-14) {
      std::copy(u.begin(), u.end(), work.coefficients().begin());
      const double dt = std::min(ns::compute_dt(work, g, cfg.cfl), cfg.t_final - t);
      time::rk3_step(u, dt, rhs);
      t += dt;
      ++steps;
    }
    std::copy(u.begin(), u.end(), run.solution.coefficients().begin());
    run.steady.steps = steps;
    run.density = error_norms(
        run.solution, [&](double x) { return euler_exact(x, cfg.t_final).rho; },
        [&](double x) { return 0.4 * pi * std::cos(2.0 * pi * (x - cfg.t_final)); });
    return run;
  }

  const time::BlockTridiagonal pattern{3 * basis.n_modes(), mesh.n_elements};
  time::SteadyControls sc;
  sc.time.cfl = cfg.cfl;
  sc.time.mode = time::Mode::ImplicitBackwardEuler;
  sc.time.steady_tol = cfg.steady_tol;
  sc.time.newton_tol = 1e-6;
  sc.time.newton_max_iters = 20;
  sc.stall_window = cfg.stall_window;
  sc.max_steps = cfg.max_steps;
  sc.cfl_growth_max = cfg.cfl_growth;
  DGField rfield(mesh, basis, 3);
  run.steady = time::march_to_steady(
      u, rhs, pattern,
      [&](std::span<const double> a) {
        std::copy(a.begin(), a.end(), work.coefficients().begin());
        return ns::compute_dt(work, g, cfg.cfl);
      },
      [&](std::span<const double> a) {
        rhs(a, rfield.coefficients());
        return ns::l2_norm(rfield);
      },
      sc);
  std::copy(u.begin(), u.end(), run.solution.coefficients().begin());

  if (cfg.problem == Problem::NsMms) {
    const int np = cfg.degree + 6;
    run.velocity = norms_of(
        mesh, np, [&](int e, double xi) { return velocity_at(run.solution, g, e, xi); },
        [](double x) { return ns::mms_exact(x).w.u; }, [](double x) { return ns::mms_exact(x).u_x; });
    run.temperature = norms_of(
        mesh, np, [&](int e, double xi) { return temperature_at(run.solution, g, e, xi); },
        [](double x) { return ns::mms_exact(x).w.T; }, [](double x) { return ns::mms_exact(x).T_x; });
    run.density = error_norms(
        run.solution, [](double x) { return ns::mms_exact(x).w.rho; },
        [](double x) { return ns::mms_exact(x).rho_x; }, 0, 3);
  }
  return run;
}

// ---------------------------------------------------------------- sweeps

std::vector<ConvergenceReport> convergence_sweep(const RunConfig& base, const std::vector<int>& cells) {
  if (cells.size() < 2) throw ConfigError("sweep_cells", "a sweep needs at least two meshes");
  const auto cfg = resolve(base);
  std::vector<ConvergenceReport> reports;
  if (cfg.problem == Problem::NsMms) {
    reports = {{"u", {}, true, {}, {}}, {"T", {}, true, {}, {}}};
  } else if (cfg.problem == Problem::Euler) {
    reports = {{"rho", {}, true, {}, {}}};
  } else if (is_scalar(cfg.problem)) {
    reports = {{"u", {}, true, {}, {}}};
  } else {
    throw ConfigError("problem", "no convergence measure for " + to_string(cfg.problem));
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    RunConfig c = base;
    c.cells = cells[i];
    std::vector<ErrorNorms> norms;
    try {
      if (is_scalar(cfg.problem)) {
        norms.push_back(run_scalar(c).errors);
      } else {
        const auto r = run_ns(c);
        if (cfg.problem == Problem::NsMms) {
          if (!r.steady.converged && !r.steady.stalled)
            for (auto& rep : reports)
              rep.warnings.push_back(std::to_string(cells[i]) + " cells: steady residual " +
                                     fmt(r.steady.residual, 3) + " after " + std::to_string(r.steady.steps) +
                                     " steps");
          norms = {r.velocity, r.temperature};
        } else {
          norms = {r.density};
        }
      }
      for (const auto& n : norms)
        if (!std::isfinite(n.l2) || !std::isfinite(n.h1)) throw StepFailure("non-finite error norm", n.l2);
    } catch (const std::exception& e) {
      for (auto& rep : reports) {
        rep.complete = false;
        rep.failure = std::to_string(cells[i]) + " cells: " + e.what();
      }
      break;
    }
    for (std::size_t q = 0; q < reports.size(); ++q) {
      ConvergenceRow row;
      row.cells = cells[i];
      row.dofs = cells[i] * (cfg.degree + 1);
      row.l2 = norms[q].l2;
      row.h1 = norms[q].h1;
      row.l2_rate = nan;
      row.h1_rate = nan;
      if (!reports[q].rows.empty()) {
        const auto& prev = reports[q].rows.back();
        const double ratio = static_cast<double>(row.cells) / prev.cells;
        row.l2_rate = eoc(prev.l2, row.l2, ratio);
        row.h1_rate = eoc(prev.h1, row.h1, ratio);
      }
      reports[q].rows.push_back(row);
    }
  }
  return reports;
}

std::string markdown_table(const ConvergenceReport& r) {
  std::ostringstream os;
  auto e3 = [](double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(3) << v;
    return s.str();
  };
  auto rate = [](double v) {
    if (std::isnan(v)) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
  };
  os << "| cells | dofs | L2 (" << r.quantity << ") | rate | H1 (" << r.quantity << ") | rate |\n";
  os << "|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& row : r.rows)
    os << "| " << row.cells << " | " << row.dofs << " | " << e3(row.l2) << " | " << rate(row.l2_rate) << " | "
       << e3(row.h1) << " | " << rate(row.h1_rate) << " |\n";
  for (const auto& w : r.warnings) os << "\nNOT STEADY: " << w << "\n";
  if (!r.complete) os << "\nINCOMPLETE: " << r.failure << "\n";
  return os.str();
}

std::string csv_table(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "cells,dofs,l2,l2_rate,h1,h1_rate\n";
  auto num = [](double v) { return std::isnan(v) ? std::string("") : fmt(v); };
  for (const auto& row : r.rows)
    os << row.cells << ',' << row.dofs << ',' << num(row.l2) << ',' << num(row.l2_rate) << ',' << num(row.h1)
       << ',' << num(row.h1_rate) << '\n';
  return os.str();
}

ShockComparison compare_shock(const NsRun& run, const RunConfig& in) {
  if (!run.profile) throw InvalidArgument("compare_shock needs a shock run");
  const auto cfg = resolve(in);
  const auto& g = ns_scheme(cfg).gas;
  const auto& prof = *run.profile;
  const auto& mesh = run.solution.mesh();
  const double rho1 = prof.upstream().rho, rho2 = prof.downstream().rho;
  const double rho_mid = 0.5 * (rho1 + rho2);

  struct Sample {
    double x;
    ns::PointState s;
  };
  std::vector<Sample> pts;
  for (int e = 0; e < mesh.n_elements; ++e)
    for (int i = 0; i < cfg.plot_points; ++i) {
      const double xi = -1.0 + 2.0 * i / (cfg.plot_points - 1);
      pts.push_back({mesh.center(e) + 0.5 * mesh.element_size(e) * xi, ns::point_state(run.solution, g, e, xi)});
    }

  double x_h = std::nan("");
  for (std::size_t i = 1; i < pts.size() && std::isnan(x_h); ++i) {
    const double a = pts[i - 1].s.w.rho - rho_mid, b = pts[i].s.w.rho - rho_mid;
    if (a <= 0.0 && b > 0.0) x_h = pts[i - 1].x + (pts[i].x - pts[i - 1].x) * (-a) / (b - a);
  }
  if (std::isnan(x_h)) throw Error("numerical density never crosses the midpoint value");
  double lo = -0.5 * (cfg.x_max - cfg.x_min), hi = -lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (prof.at(mid).rho < rho_mid ? lo : hi) = mid;
  }
  ShockComparison c;
  c.shift = x_h - 0.5 * (lo + hi);

  for (const auto& p : pts)
    c.rho_linf = std::max(c.rho_linf, std::abs(p.s.w.rho - prof.at(p.x - c.shift).rho) / (rho2 - rho1));
  for (const auto& p : pts) {
    if (std::abs(p.s.tau) > std::abs(c.tau_peak)) c.tau_peak = p.s.tau;
    if (std::abs(p.s.q) > std::abs(c.q_peak)) c.q_peak = p.s.q;
  }
  for (const auto& r : prof.sample(cfg.x_min, cfg.x_max, 20001)) {
    if (std::abs(r.tau) > std::abs(c.tau_peak_ref)) c.tau_peak_ref = r.tau;
    if (std::abs(r.q) > std::abs(c.q_peak_ref)) c.q_peak_ref = r.q;
  }

  std::vector<ns::PointState> centers;
  for (int e = 0; e < mesh.n_elements; ++e) centers.push_back(ns::point_state(run.solution, g, e, 0.0));
  auto count = [&](auto field, double peak) {
    int n = 0;
    for (std::size_t i = 1; i + 1 < centers.size(); ++i) {
      const double a = field(centers[i - 1]), b = field(centers[i]), d = field(centers[i + 1]);
      if ((b - a) * (d - b) < 0.0 && std::abs(b) > 0.05 * std::abs(peak)) ++n;
    }
    return n;
  };
  c.tau_extrema = count([](const ns::PointState& s) { return s.tau; }, c.tau_peak_ref);
  c.q_extrema = count([](const ns::PointState& s) { return s.q; }, c.q_peak_ref);
  return c;
}

// ---------------------------------------------------------------- output

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

void write_scalar_outputs(const RunConfig& cfg, const ScalarRun& run, const fs::path& dir) {
  const auto& mesh = run.solution.mesh();
  auto sol = open_out(dir / "solution.csv");
  sol << "x,u_h,u_exact\n";
  for (int e = 0; e < mesh.n_elements; ++e)
    for (int i = 0; i < cfg.plot_points; ++i) {
      const double xi = -1.0 + 2.0 * i / (cfg.plot_points - 1);
      const double x = mesh.center(e) + 0.5 * mesh.element_size(e) * xi;
      sol << fmt(x) << ',' << fmt(run.solution.value(e, xi)) << ',' << fmt(scalar_exact(cfg, x, run.t_final)) << '\n';
    }
  auto en = open_out(dir / "energy.csv");
  en << "t,energy,energy_exact\n";
  for (const auto& s : run.energy) en << fmt(s.t) << ',' << fmt(s.energy) << ',' << fmt(exact_energy(cfg, mesh, s.t)) << '\n';
}

void write_ns_outputs(const RunConfig& cfg, const NsRun& run, const fs::path& dir) {
  const auto scheme = ns_scheme(cfg);
  const auto& g = scheme.gas;
  const auto& mesh = run.solution.mesh();
  auto sol = open_out(dir / "solution.csv");
  sol << "x,rho,u,T,tau,q";
  if (run.profile) sol << ",rho_ref,u_ref,T_ref,tau_ref,q_ref";
  if (cfg.problem == Problem::NsMms) sol << ",rho_exact,u_exact,T_exact";
  sol << '\n';
  for (int e = 0; e < mesh.n_elements; ++e)
    for (int i = 0; i < cfg.plot_points; ++i) {
      const double xi = -1.0 + 2.0 * i / (cfg.plot_points - 1);
      const double x = mesh.center(e) + 0.5 * mesh.element_size(e) * xi;
      const auto s = ns::point_state(run.solution, g, e, xi);
      sol << fmt(x) << ',' << fmt(s.w.rho) << ',' << fmt(s.w.u) << ',' << fmt(s.w.T) << ',' << fmt(s.tau) << ','
          << fmt(s.q);
      if (run.profile) {
        const auto r = run.profile->at(x);
        sol << ',' << fmt(r.rho) << ',' << fmt(r.u) << ',' << fmt(r.T) << ',' << fmt(r.tau) << ',' << fmt(r.q);
      }
      if (cfg.problem == Problem::NsMms) {
        const auto m = ns::mms_exact(x);
        sol << ',' << fmt(m.w.rho) << ',' << fmt(m.w.u) << ',' << fmt(m.w.T);
      }
      sol << '\n';
    }
  // derivative quantities are piecewise constant for k = 1, so also give one
  // value per element at its center
  auto cells = open_out(dir / "cells.csv");
  cells << "x,rho,u,T,tau,q\n";
  for (int e = 0; e < mesh.n_elements; ++e) {
    const auto s = ns::point_state(run.solution, g, e, 0.0);
    cells << fmt(mesh.center(e)) << ',' << fmt(s.w.rho) << ',' << fmt(s.w.u) << ',' << fmt(s.w.T) << ','
          << fmt(s.tau) << ',' << fmt(s.q) << '\n';
  }
  if (run.profile)
    reference::write_profile_table((dir / "reference_profile.txt").string(),
                                   run.profile->sample(mesh.x_min, mesh.x_max, 2001));
  auto hist = open_out(dir / "residual.csv");
  hist << "step,residual\n";
  for (std::size_t i = 0; i < run.steady.history.size(); ++i) hist << i << ',' << fmt(run.steady.history[i]) << '\n';
}

}  // namespace

std::string run_and_write(const RunConfig& in) {
  in.validate();
  const auto cfg = resolve(in);
  const fs::path dir = cfg.output_dir.empty() ? fs::path("out") : fs::path(cfg.output_dir);
  fs::create_directories(dir);
  {
    auto c = open_out(dir / "config.txt");
    c << to_config_text(in);
  }
  std::ostringstream summary;
  summary << "problem=" << to_string(cfg.problem) << " cells=" << cfg.cells << " degree=" << cfg.degree
          << " variant=" << cfg.variant << " cip=" << cfg.cip;
  if (is_scalar(cfg.problem)) {
    const auto run = run_scalar(cfg);
    write_scalar_outputs(cfg, run, dir);
    summary << " steps=" << run.steps << " dt=" << fmt(run.dt) << " l2=" << fmt(run.errors.l2)
            << " h1=" << fmt(run.errors.h1) << " energy=" << fmt(run.energy.back().energy);
  } else {
    const auto run = run_ns(cfg);
    write_ns_outputs(cfg, run, dir);
    summary << " steps=" << run.steady.steps;
    if (cfg.problem != Problem::Euler)
      summary << " residual=" << fmt(run.steady.residual) << " converged=" << (run.steady.converged ? 1 : 0)
              << " stalled=" << (run.steady.stalled ? 1 : 0);
    if (cfg.problem == Problem::NsMms)
      summary << " l2_u=" << fmt(run.velocity.l2) << " h1_u=" << fmt(run.velocity.h1)
              << " l2_T=" << fmt(run.temperature.l2) << " h1_T=" << fmt(run.temperature.h1);
    if (cfg.problem == Problem::Euler) summary << " l2_rho=" << fmt(run.density.l2);
    if (run.profile) {
      const auto c = compare_shock(run, cfg);
      summary << " shift=" << fmt(c.shift) << " rho_linf=" << fmt(c.rho_linf) << " tau_peak=" << fmt(c.tau_peak)
              << " tau_peak_ref=" << fmt(c.tau_peak_ref) << " q_peak=" << fmt(c.q_peak)
              << " q_peak_ref=" << fmt(c.q_peak_ref);
    }
  }
  const std::string line = summary.str();
  auto s = open_out(dir / "summary.txt");
  s << line << '\n';
  return line;
}

}  // namespace kfdg::harness
