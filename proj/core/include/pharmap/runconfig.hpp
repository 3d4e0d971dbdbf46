#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pharmap/grid.hpp"
#include "pharmap/solver.hpp"

namespace pharmap {

/// Flat sectioned key-value run configuration; one file determines a run.
/// Unknown keys and malformed values raise ConfigError naming the field.
struct RunConfig {
  DomainSpec domain = RectSpec{0, 1, 0, 1};
  int nx = 65, ny = 65;
  double p = 2.0;

  std::string boundary_family = "harmonic-quad";
  std::map<std::string, double> boundary_params;
  std::string boundary_csv;  // alternative to the analytic family

  SolveOptions solve;

  std::vector<double> levels;          // analyze: contour levels
  std::vector<double> length_samples;  // analyze: s-samples of L(s)

  std::vector<std::string> checks;     // check: requested check names
  std::vector<std::string> whitelist;  // violations tolerated by cmd_check
  bool allow_inconclusive = true;
  double region_a = 0.2, region_b = 0.8;
  std::string region_kind = "band";  // band | annulus
  bool radial_equality = false;
  std::vector<double> check_samples;
  struct {
    double cx = 0, cy = 0, R = 1, s = 0.5;
  } ball;

  std::string out_dir = "out";
  std::uint64_t seed = 42;
  double tolerance_scale = 1.0;
};

RunConfig parse_config(const std::string& path);
/// Exposed for tests: parse from an already-loaded string.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<memory>");

}  // namespace pharmap
