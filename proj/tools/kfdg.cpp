#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "kfdg/errors.hpp"
#include "kfdg/harness.hpp"
#include "kfdg/presets.hpp"

namespace fs = std::filesystem;
using namespace kfdg;

namespace {

struct CommonOptions {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<double> cfl, cip;
  std::optional<int> degree, cells;
  std::optional<std::string> variant;
  std::vector<std::string> settings;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "key = value configuration file");
  app->add_option("--preset", o.preset, "named preset (see `kfdg presets`)");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--cfl", o.cfl, "CFL number");
  app->add_option("--cip", o.cip, "interior penalty constant");
  app->add_option("--degree", o.degree, "polynomial degree");
  app->add_option("--cells", o.cells, "number of cells");
  app->add_option("--variant", o.variant, "none, nipg or sipg")->check(CLI::IsMember({"none", "nipg", "sipg"}));
  app->add_option("--set", o.settings, "extra key=value override (repeatable)");
}

harness::RunConfig resolve_config(const CommonOptions& o, const presets::Preset** preset) {
  harness::RunConfig cfg;
  *preset = nullptr;
  if (!o.preset.empty()) {
    *preset = &presets::find(o.preset);
    cfg = (*preset)->config;
  }
  if (!o.config.empty()) cfg = harness::load_config_file(o.config, cfg);
  for (const auto& s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, "--set expects key=value");
    harness::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.cfl) cfg.cfl = *o.cfl;
  if (o.cip) cfg.cip = *o.cip;
  if (o.degree) cfg.degree = *o.degree;
  if (o.cells) cfg.cells = *o.cells;
  if (o.variant) cfg.variant = *o.variant;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (cfg.output_dir.empty()) cfg.output_dir = o.preset.empty() ? "out" : "out/" + o.preset;
  cfg.validate();
  return cfg;
}

void print_checks(const std::vector<presets::Check>& checks) {
  for (const auto& c : checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.expected.quantity << "." << c.expected.metric
              << " measured=" << harness::fmt(c.measured, 4) << " expected=" << harness::fmt(c.expected.value, 4)
              << (c.expected.relative ? " rel_tol=" : " abs_tol=") << c.expected.tolerance << "\n";
}

int cmd_run(const CommonOptions& o) {
  const presets::Preset* preset = nullptr;
  auto cfg = resolve_config(o, &preset);
  std::cout << harness::run_and_write(cfg) << "\n";
  std::cout << "outputs in " << cfg.output_dir << "\n";
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::vector<int>& cells_override) {
  const presets::Preset* preset = nullptr;
  auto cfg = resolve_config(o, &preset);
  const auto cells = cells_override.empty() ? cfg.sweep_cells : cells_override;
  const auto reports = harness::convergence_sweep(cfg, cells);
  fs::create_directories(cfg.output_dir);
  bool complete = true;
  for (const auto& r : reports) {
    std::cout << harness::markdown_table(r) << "\n";
    std::ofstream(fs::path(cfg.output_dir) / ("convergence_" + r.quantity + ".md")) << harness::markdown_table(r);
    std::ofstream(fs::path(cfg.output_dir) / ("convergence_" + r.quantity + ".csv")) << harness::csv_table(r);
    complete = complete && r.complete;
  }
  if (preset && cells_override.empty()) print_checks(presets::check_sweep(*preset, reports));
  return complete ? 0 : 1;
}

int cmd_presets(const std::string& write_dir, const std::string& show) {
  if (!show.empty()) {
    std::cout << presets::to_file_text(presets::find(show));
    return 0;
  }
  if (!write_dir.empty()) {
    fs::create_directories(write_dir);
    for (const auto& p : presets::registry())
      std::ofstream(fs::path(write_dir) / (p.name + ".cfg")) << presets::to_file_text(p);
    std::cout << "wrote " << presets::registry().size() << " presets to " << write_dir << "\n";
    return 0;
  }
  for (const auto& p : presets::registry())
    std::cout << p.name << (p.is_sweep() ? "  [sweep]  " : "  ") << p.description << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetic-flux DG solver for 1-D convection-diffusion and Navier-Stokes"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "single run; writes solution, energy/residual history and summary");
  add_common(run, run_opts);

  CommonOptions sweep_opts;
  std::vector<int> sweep_cells;
  auto* sweep = app.add_subcommand("sweep", "mesh refinement study with markdown and CSV tables");
  add_common(sweep, sweep_opts);
  sweep->add_option("--cells-list", sweep_cells, "meshes to run (default: sweep_cells of the config)")
      ->delimiter(',');

  std::string write_dir, show;
  auto* list = app.add_subcommand("presets", "list the preset registry");
  list->add_option("--write", write_dir, "write every preset as a config file into this directory");
  list->add_option("--show", show, "print one preset as a config file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_cells);
    if (*list) return cmd_presets(write_dir, show);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
