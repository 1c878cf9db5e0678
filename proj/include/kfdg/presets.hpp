#pragma once

#include <string>
#include <vector>

#include "kfdg/harness.hpp"

namespace kfdg::presets {

/// One expected number. Values use a relative tolerance, rates an absolute one.
/// Sweep metrics refer to the last row; `quantity` selects the report (u, T, rho).
struct Expectation {
  std::string metric;  // l2, h1, l2_rate, h1_rate
  std::string quantity = "u";
  double value = 0.0;
  double tolerance = 0.0;
  bool relative = true;
};

struct Preset {
  std::string name;
  std::string description;
  harness::RunConfig config;  // sweep presets set config.sweep_cells
  std::vector<Expectation> expected;

  bool is_sweep() const { return !config.sweep_cells.empty(); }
};

const std::vector<Preset>& registry();
/// Throws ConfigError("preset", ...) for unknown names.
const Preset& find(const std::string& name);

/// Config file text: the run configuration plus the expectations as comments.
std::string to_file_text(const Preset& p);

struct Check {
  Expectation expected;
  double measured = 0.0;
  bool pass = false;
};
std::vector<Check> check_single(const Preset& p, const harness::ErrorNorms& norms);
std::vector<Check> check_sweep(const Preset& p, const std::vector<harness::ConvergenceReport>& reports);

}  // namespace kfdg::presets
