#pragma once

#include <optional>
#include <string>

#include "pharmap/runconfig.hpp"

namespace pharmap::cli {

// exit codes shared by every subcommand
inline constexpr int kOk = 0;
inline constexpr int kCheckViolation = 1;
inline constexpr int kUsageError = 2;
inline constexpr int kNumericalFailure = 3;

struct CommonFlags {
  std::string out_dir;           // overrides [output] dir when nonempty
  int threads = 1;
  double tolerance_scale = 1.0;
};

int cmd_solve(const RunConfig& cfg, const CommonFlags& flags);
int cmd_analyze(const RunConfig& cfg, const CommonFlags& flags,
                const std::string& artifact_dir);
int cmd_check(const RunConfig& cfg, const CommonFlags& flags, const std::string& artifact_dir);

struct RadialArgs {
  double p = 12.0;
  std::optional<double> c;
  std::string mode = "profile";  // profile | admissible-interval | counterexample
  double r0 = 1.0, r1 = 2.0, H0 = 1.0, H0p = 0.4;
  int resolution = 385;
};
int cmd_radial(const RadialArgs& args, const CommonFlags& flags);

int cmd_report(const CommonFlags& flags);

}  // namespace pharmap::cli
