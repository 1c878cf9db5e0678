#include "kfdg/presets.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "kfdg/errors.hpp"

namespace kfdg::presets {

using harness::Problem;
using harness::RunConfig;

namespace {

constexpr double kValueTol = 0.10;
constexpr double kRateTol = 0.2;

const std::vector<int> kTableCells{20, 40, 80, 160, 320};

struct TableData {
  int test_case;
  const char* variant;
  int degree;
  double l2[5];
  double h1[5];
  double l2_rate;  // last row
  double h1_rate;
};

// Published convergence tables (cells 20, 40, 80, 160, 320).
const TableData kTables[] = {
    {1, "nipg", 1, {1.259e-02, 3.535e-03, 1.245e-03, 3.511e-04, 3.986e-05},
     {2.757e-01, 1.356e-01, 6.639e-02, 3.257e-02, 1.614e-02}, 3.14, 1.01},
    {1, "nipg", 2, {3.376e-04, 7.361e-05, 1.660e-05, 3.433e-06, 6.892e-07},
     {1.416e-02, 3.612e-03, 9.186e-04, 2.243e-04, 5.103e-05}, 2.32, 2.14},
    {1, "sipg", 1, {1.245e-02, 1.843e-03, 3.170e-04, 6.181e-05, 1.351e-05},
     {2.866e-01, 1.403e-01, 6.807e-02, 3.293e-02, 1.615e-02}, 2.19, 1.03},
    {1, "sipg", 2, {1.354e-04, 1.622e-05, 1.900e-06, 2.153e-07, 2.487e-08},
     {1.367e-02, 3.296e-03, 7.692e-04, 1.748e-04, 4.324e-05}, 3.11, 2.02},
    {2, "nipg", 1, {1.592e-02, 8.018e-03, 4.031e-03, 2.022e-03, 1.013e-03},
     {1.088e-01, 5.451e-02, 2.727e-02, 1.364e-02, 6.820e-03}, 1.00, 1.00},
    {2, "nipg", 2, {7.467e-04, 1.860e-04, 4.648e-05, 1.162e-05, 2.906e-06},
     {4.778e-03, 1.195e-03, 2.989e-04, 7.472e-05, 1.868e-05}, 2.00, 2.00},
    {2, "sipg", 1, {2.255e-03, 5.653e-04, 1.415e-04, 3.538e-05, 8.846e-06},
     {1.124e-01, 5.638e-02, 2.823e-02, 1.412e-02, 7.063e-03}, 2.00, 1.00},
    {2, "sipg", 2, {1.355e-04, 1.713e-05, 2.158e-06, 2.709e-07, 3.394e-08},
     {9.936e-03, 2.497e-03, 6.268e-04, 1.571e-04, 3.932e-05}, 3.00, 2.00},
};

// RK3 CFL numbers; the diffusive limit of the penalized operators is well
// below the default 0.9/(2k+1).
double scalar_cfl(int test_case, int degree) {
  if (test_case == 1) return degree == 1 ? 0.05 : 0.025;
  return degree == 1 ? 0.015 : 0.008;
}

RunConfig scalar_case(int test_case, const std::string& variant, int degree) {
  RunConfig c;
  c.problem = Problem::ConvectionDiffusion;
  c.variant = variant;
  c.degree = degree;
  c.cip = 10.0;
  c.beta = 1.0;
  c.c = 1.0;
  c.x_min = -1.0;
  c.x_max = 1.0;
  c.mu = test_case == 1 ? 0.001 : 1.0;
  c.t_final = test_case == 1 ? 30.0 : 0.5;
  c.cfl = scalar_cfl(test_case, degree);
  return c;
}

std::string label(int degree) { return "p" + std::to_string(degree); }

std::vector<Preset> build() {
  std::vector<Preset> out;

  for (const auto& t : kTables) {
    const std::string base = "testcase" + std::to_string(t.test_case) + "-" + t.variant + "-" + label(t.degree);
    const std::string desc = "Test case " + std::to_string(t.test_case) + ", " + t.variant + ", P" +
                             std::to_string(t.degree);
    for (int i = 0; i < 5; ++i) {
      Preset p{base + "-" + std::to_string(kTableCells[i]),
               desc + ", " + std::to_string(kTableCells[i]) + " cells",
               scalar_case(t.test_case, t.variant, t.degree),
               {{"l2", "u", t.l2[i], kValueTol, true}, {"h1", "u", t.h1[i], kValueTol, true}}};
      p.config.cells = kTableCells[i];
      out.push_back(p);
    }
    Preset sweep{base, desc + ", refinement 20 to 320 cells", scalar_case(t.test_case, t.variant, t.degree),
                 {{"l2", "u", t.l2[4], kValueTol, true},
                  {"l2_rate", "u", t.l2_rate, kRateTol, false},
                  {"h1_rate", "u", t.h1_rate, kRateTol, false}}};
    sweep.config.sweep_cells = kTableCells;
    out.push_back(sweep);
  }

  // energy history of the scheme without interior stabilization
  for (int tc : {1, 2}) {
    Preset p{"testcase" + std::to_string(tc) + "-none-p1-20",
             "Test case " + std::to_string(tc) + ", no stabilization, P1, 20 cells",
             scalar_case(tc, "none", 1),
             {}};
    p.config.cells = 20;
    p.config.cip = 0.0;
    out.push_back(p);
  }

  for (const char* v : {"nipg", "sipg"})
    for (int k : {1, 2}) {
      RunConfig c;
      c.problem = Problem::Test3;
      c.variant = v;
      c.degree = k;
      c.cip = 10.0;
      c.beta = 1.0;
      c.c = 1.0;
      c.mu = 0.005;
      c.x_min = 0.0;
      c.x_max = 4.0;
      c.t_final = 1.0;
      c.cfl = scalar_cfl(2, k);  // penalty-limited on the finer meshes
      c.sweep_cells = {50, 100, 150, 200, 250, 300, 350, 400};
      const bool nipg = std::string(v) == "nipg";
      const double rate = nipg ? k : k + 1;
      out.push_back({std::string("testcase3-") + v + "-" + label(k),
                     std::string("Test case 3, ") + v + ", P" + std::to_string(k) + ", 50 to 400 cells",
                     c,
                     {{"l2_rate", "u", rate, kRateTol, false}}});
    }

  for (double mu : {0.01, 1.0})
    for (const char* v : {"nipg", "sipg"})
      for (int k : {1, 2, 3}) {
        RunConfig c;
        c.problem = Problem::NsMms;
        c.variant = v;
        c.degree = k;
        c.cip = 10.0;
        c.mu = mu;
        c.gamma = 1.4;
        c.gas_r = 1.0;
        c.prandtl = 2.0 / 3.0;
        c.x_min = 0.0;
        c.x_max = 1.0;
        c.cfl = 5.0;
        c.cfl_growth = 100.0;
        c.max_steps = 3000;
        c.sweep_cells = {40, 80, 160, 320};
        const bool nipg = std::string(v) == "nipg";
        const double sol = nipg ? k : k + 1;
        const std::string m = mu < 0.1 ? "mu0p01" : "mu1";
        out.push_back({"ns-mms-" + m + "-" + v + "-" + label(k),
                       std::string("Manufactured Navier-Stokes solution, mu = ") + (mu < 0.1 ? "0.01" : "1") +
                           ", " + v + ", P" + std::to_string(k),
                       c,
                       {{"l2_rate", "u", sol, 0.25, false},
                        {"h1_rate", "u", static_cast<double>(k), 0.25, false},
                        {"l2_rate", "T", sol, 0.25, false},
                        {"h1_rate", "T", static_cast<double>(k), 0.25, false}}});
      }

  for (int n : {100, 200})
    for (int k : {1, 2})
      for (const char* v : {"nipg", "sipg"}) {
        RunConfig c;
        c.problem = Problem::NsShock;
        c.variant = v;
        c.degree = k;
        c.cells = n;
        c.cip = 10.0;
        c.mach = 1.5;
        c.gamma = 5.0 / 3.0;
        c.prandtl = 2.0 / 3.0;
        c.mu = 0.0005;
        c.mu_power = 0.8;
        c.gas_r = 1.0;
        c.x_min = -0.125;
        c.x_max = 0.125;
        c.cfl = 5.0;
        c.max_steps = 20000;
        c.stall_window = 0;  // the residual has long plateaus while the layer settles
        out.push_back({"ns-shock-n" + std::to_string(n) + "-" + label(k) + "-" + v,
                       "Stationary Mach 1.5 shock, " + std::to_string(n) + " cells, " + v + ", P" +
                           std::to_string(k),
                       c,
                       {}});
      }

  {
    RunConfig c;
    c.problem = Problem::Euler;
    c.variant = "none";
    c.degree = 2;
    c.t_final = 1.0;
    c.sweep_cells = {10, 20, 40, 80};
    out.push_back({"euler-density-wave-p2", "Euler equations, advected density wave, P2", c,
                   {{"l2_rate", "rho", 3.0, kRateTol, false}}});
  }
  return out;
}

bool within(const Expectation& e, double measured) {
  if (!std::isfinite(measured)) return false;
  if (e.relative) return std::abs(measured - e.value) <= e.tolerance * std::abs(e.value);
  return std::abs(measured - e.value) <= e.tolerance;
}

}  // namespace

const std::vector<Preset>& registry() {
  static const std::vector<Preset> presets = build();
  return presets;
}

const Preset& find(const std::string& name) {
  for (const auto& p : registry())
    if (p.name == name) return p;
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

std::string to_file_text(const Preset& p) {
  std::ostringstream os;
  os << "# " << p.name << "\n# " << p.description << "\n";
  for (const auto& e : p.expected) {
    os << "# expect " << e.quantity << "." << e.metric << " = " << std::setprecision(4) << e.value << " +- ";
    if (e.relative)
      os << e.tolerance * 100.0 << "%\n";
    else
      os << e.tolerance << "\n";
  }
  os << harness::to_config_text(p.config);
  return os.str();
}

std::vector<Check> check_single(const Preset& p, const harness::ErrorNorms& norms) {
  std::vector<Check> out;
  for (const auto& e : p.expected) {
    double m = std::nan("");
    if (e.metric == "l2") m = norms.l2;
    if (e.metric == "h1") m = norms.h1;
    out.push_back({e, m, within(e, m)});
  }
  return out;
}

std::vector<Check> check_sweep(const Preset& p, const std::vector<harness::ConvergenceReport>& reports) {
  std::vector<Check> out;
  for (const auto& e : p.expected) {
    double m = std::nan("");
    for (const auto& r : reports) {
      if (r.quantity != e.quantity || r.rows.empty() || !r.complete) continue;
      const auto& last = r.rows.back();
      if (e.metric == "l2") m = last.l2;
      if (e.metric == "h1") m = last.h1;
      if (e.metric == "l2_rate") m = last.l2_rate;
      if (e.metric == "h1_rate") m = last.h1_rate;
    }
    out.push_back({e, m, within(e, m)});
  }
  return out;
}

}  // namespace kfdg::presets
