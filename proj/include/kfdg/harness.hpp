#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kfdg/dg_field.hpp"
#include "kfdg/dg_ns.hpp"
#include "kfdg/dg_scalar.hpp"
#include "kfdg/reference_solutions.hpp"
#include "kfdg/time_integration.hpp"

namespace kfdg::harness {

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;  // seminorm
};

/// Element-wise Gauss quadrature with k + 3 + extra points.
ErrorNorms error_norms(const DGField& u, const ScalarFunction& exact, const ScalarFunction& exact_dx,
                       int component = 0, int extra_points = 0);

/// log(e_coarse/e_fine)/log(ratio).
double eoc(double e_coarse, double e_fine, double ratio = 2.0);

enum class Problem { Convection, ConvectionDiffusion, Test3, Euler, NsMms, NsShock };
Problem parse_problem(const std::string& name);
std::string to_string(Problem p);

/// Flat key/value run description. Every field has a config key of the same
/// name (see config_keys()). NaN fields take the problem default.
struct RunConfig {
  Problem problem = Problem::ConvectionDiffusion;
  int cells = 20;
  int degree = 1;
  std::string variant = "nipg";
  double cip = 10.0;
  double beta = 1.0;
  double c = 1.0;
  double mu = kNaN;
  double t_final = kNaN;
  double cfl = 0.0;          // 0: problem default
  double x_min = kNaN;
  double x_max = kNaN;
  // gas problems
  double gamma = kNaN;
  double gas_r = 1.0;
  double prandtl = 2.0 / 3.0;
  double mach = 1.5;
  double mu_power = 0.8;     // shock viscosity exponent
  double steady_tol = 1e-10;
  int max_steps = 5000;
  double cfl_growth = 1.0;   // SER cap for steady marching
  int stall_window = 20;     // stop a stagnating steady march; 0 disables
  int plot_points = 10;      // per element
  std::string output_dir;
  std::vector<int> sweep_cells;  // used by sweep presets

  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  void validate() const;
  double effective_cfl() const;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys and bad
/// values raise ConfigError naming the key.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();
std::string to_config_text(const RunConfig& cfg);

struct EnergySample {
  double t = 0.0;
  double energy = 0.0;
};

struct ScalarRun {
  DGField solution;
  std::vector<EnergySample> energy;
  ErrorNorms errors;
  int steps = 0;
  double dt = 0.0;
  double t_final = 0.0;
};

/// Time-accurate scalar runs (convection, convection_diffusion, test3).
ScalarRun run_scalar(const RunConfig& cfg);

/// Exact solution of a scalar problem at time t.
double scalar_exact(const RunConfig& cfg, double x, double t);
double scalar_exact_dx(const RunConfig& cfg, double x, double t);

struct NsRun {
  DGField solution;
  time::SteadyReport steady;
  ErrorNorms velocity;     // MMS only
  ErrorNorms temperature;  // MMS only
  ErrorNorms density;      // MMS and euler
  std::optional<reference::ShockProfile> profile;
};

ns::NSSchemeConfig ns_scheme(const RunConfig& cfg);
NsRun run_ns(const RunConfig& cfg);

/// Shock structure against the reference profile. The profile is shifted so
/// that both density midpoints coincide. Peaks are the values of largest
/// magnitude; extrema are counted on cell-center values above 5% of the peak.
struct ShockComparison {
  double shift = 0.0;     // numerical minus reference midpoint location
  double rho_linf = 0.0;  // max |rho_h - rho_ref| / (rho_2 - rho_1)
  double tau_peak = 0.0, tau_peak_ref = 0.0;
  double q_peak = 0.0, q_peak_ref = 0.0;
  int tau_extrema = 0, q_extrema = 0;
};
ShockComparison compare_shock(const NsRun& run, const RunConfig& cfg);

struct ConvergenceRow {
  int cells = 0;
  int dofs = 0;
  double l2 = 0.0;
  double l2_rate = 0.0;  // NaN on the first row
  double h1 = 0.0;
  double h1_rate = 0.0;
};

struct ConvergenceReport {
  std::string quantity;
  std::vector<ConvergenceRow> rows;
  bool complete = true;
  std::string failure;
  std::vector<std::string> warnings;  // MMS runs that hit max_steps above steady_tol
};

/// One report per tracked quantity (u for scalar problems; u and T for MMS).
std::vector<ConvergenceReport> convergence_sweep(const RunConfig& base, const std::vector<int>& cells);

std::string markdown_table(const ConvergenceReport& r);
std::string csv_table(const ConvergenceReport& r);

/// Writes the run outputs into cfg.output_dir. Returns the summary line.
std::string run_and_write(const RunConfig& cfg);

/// Formatting used for all numeric output: scientific, 6 significant digits
/// beyond the leading one.
std::string fmt(double v, int digits = 6);

}  // namespace kfdg::harness
