#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nanoheat/config.hpp"
#include "nanoheat/spectral.hpp"
#include "nanoheat/tasks.hpp"

namespace {

int run(const std::string& config_path, const std::vector<std::string>& sets,
        const nanoheat::TaskOptions& options) {
  try {
    nanoheat::RunConfig cfg = nanoheat::RunConfig::parse_file(config_path);
    for (const std::string& assignment : sets) cfg.apply_override(assignment);
    nanoheat::run_task(cfg, options, std::cout);
    return 0;
  } catch (const nanoheat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nanoheat::QuadratureError& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n"
              << "best estimate " << e.achieved.value << " with error estimate "
              << e.achieved.error << " after " << e.achieved.panels << " panels\n"
              << "raise quadrature.panel_budget or loosen --rel-tol to accept\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radiative heat transfer between anisotropic dipolar nanoparticles"};
  app.set_version_flag("--version", "nanoheat 0.1.0");
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  nanoheat::TaskOptions options;

  // Missing config files go through the ConfigError path (exit 2) rather
  // than CLI11's validator, so all config mistakes share one exit code.
  CLI::App* run_cmd = app.add_subcommand("run", "Run the task named in the config file");
  run_cmd->add_option("-c,--config", config_path, "INI config file")->required();
  run_cmd->add_option("-s,--set", sets,
                      "Override a config key, e.g. --set pair.d_nm=600 (repeatable)");
  run_cmd->add_option("-o,--out", options.out_dir, "Output directory (default: current)");
  run_cmd->add_option("-j,--jobs", options.jobs, "Worker threads for sweep points")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--rel-tol", options.rel_tol,
                      "Override the spectral quadrature relative tolerance");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check the dipole picture for the configured pair");
  validate_cmd->add_option("-c,--config", config_path, "INI config file")->required();
  validate_cmd->add_option("-s,--set", sets,
                           "Override a config key, e.g. --set pair.d_nm=600 (repeatable)");
  validate_cmd->add_option("-o,--out", options.out_dir, "Output directory (default: current)");

  CLI11_PARSE(app, argc, argv);

  if (validate_cmd->parsed()) options.task_override = "validate";
  return run(config_path, sets, options);
}
