#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "pharmap/errors.hpp"
#include "pharmap/numerics.hpp"
#include "pharmap/runconfig.hpp"

using namespace pharmap;
using namespace pharmap::cli;

int main(int argc, char** argv) {
  CLI::App app{"pharmap: planar p-harmonic map laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path, artifact_dir;
  CommonFlags flags;
  app.add_option("--config", config_path, "run configuration file")->configurable(false);
  app.add_option("--out", flags.out_dir, "output directory (overrides [output] dir)");
  app.add_option("--threads", flags.threads, "worker threads for field evaluation");
  app.add_option("--tolerance-scale", flags.tolerance_scale, "scales check tolerances");

  auto* solve = app.add_subcommand("solve", "solve the Dirichlet problem from a config");
  auto* analyze = app.add_subcommand("analyze", "curvature, level curves, length function, bounds");
  analyze->add_option("--artifact", artifact_dir, "directory with a solved map to analyze");
  auto* check = app.add_subcommand("check", "run the requested theorem checks");
  check->add_option("--artifact", artifact_dir, "directory with a solved map to check");

  RadialArgs rargs;
  auto* radial = app.add_subcommand("radial", "radial profiles, aperture interval, counterexample");
  radial->add_option("--p", rargs.p, "exponent p");
  double c_value = 0;
  auto* copt = radial->add_option("--c", c_value, "aperture constant c > 1");
  radial->add_option("--mode", rargs.mode, "profile | admissible-interval | counterexample");
  radial->add_option("--r0", rargs.r0, "profile start radius");
  radial->add_option("--r1", rargs.r1, "profile end radius");
  radial->add_option("--H0", rargs.H0, "initial H(r0)");
  radial->add_option("--H0p", rargs.H0p, "initial H'(r0)");
  radial->add_option("--resolution", rargs.resolution, "sector grid nodes per axis");

  auto* report = app.add_subcommand("report", "concatenate artifact summaries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    set_num_threads(flags.threads);
    if (radial->parsed()) {
      if (copt->count() > 0) rargs.c = c_value;
      return cmd_radial(rargs, flags);
    }
    if (report->parsed()) return cmd_report(flags);

    if (config_path.empty()) throw ConfigError("config: --config PATH is required");
    const RunConfig cfg = parse_config(config_path);
    if (solve->parsed()) return cmd_solve(cfg, flags);
    if (analyze->parsed()) return cmd_analyze(cfg, flags, artifact_dir);
    if (check->parsed()) return cmd_check(cfg, flags, artifact_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsageError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kUsageError;
}
