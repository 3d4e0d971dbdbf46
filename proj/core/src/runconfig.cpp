#include "pharmap/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pharmap/errors.hpp"

namespace pharmap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_number(key, trim(tok)));
  return out;
}

std::vector<std::string> to_names(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;

  // domain assembly state
  std::string shape = "rectangle";
  std::map<std::string, double> dom;

  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string path = section.empty() ? key : section + "." + key;

    if (section == "domain") {
      if (key == "shape") shape = val;
      else if (key == "nx") cfg.nx = static_cast<int>(to_number(path, val));
      else if (key == "ny") cfg.ny = static_cast<int>(to_number(path, val));
      else dom[key] = to_number(path, val);
    } else if (section == "problem") {
      if (key == "p") cfg.p = to_number(path, val);
      else throw ConfigError(path + ": unknown key");
    } else if (section == "boundary") {
      if (key == "family") cfg.boundary_family = val;
      else if (key == "csv") cfg.boundary_csv = val;
      else cfg.boundary_params[key] = to_number(path, val);
    } else if (section == "solver") {
      if (key == "method") {
        if (val == "gradient-descent") cfg.solve.method = SolveMethod::GradientDescent;
        else if (val == "damped-newton") cfg.solve.method = SolveMethod::DampedNewton;
        else throw ConfigError(path + ": unknown method '" + val + "'");
      } else if (key == "max_iters") cfg.solve.max_iters = static_cast<int>(to_number(path, val));
      else if (key == "grad_tol") cfg.solve.grad_tol = to_number(path, val);
      else if (key == "epsilon") cfg.solve.epsilon_reg = to_number(path, val);
      else if (key == "ls_shrink") cfg.solve.ls_shrink = to_number(path, val);
      else if (key == "ls_c1") cfg.solve.ls_c1 = to_number(path, val);
      else if (key == "continuation") cfg.solve.continuation = to_bool(path, val);
      else throw ConfigError(path + ": unknown key");
    } else if (section == "analyze") {
      if (key == "levels") cfg.levels = to_list(path, val);
      else if (key == "length_samples") cfg.length_samples = to_list(path, val);
      else throw ConfigError(path + ": unknown key");
    } else if (section == "check") {
      if (key == "checks") cfg.checks = to_names(val);
      else if (key == "whitelist") cfg.whitelist = to_names(val);
      else if (key == "allow_inconclusive") cfg.allow_inconclusive = to_bool(path, val);
      else if (key == "region") cfg.region_kind = val;
      else if (key == "region_a") cfg.region_a = to_number(path, val);
      else if (key == "region_b") cfg.region_b = to_number(path, val);
      else if (key == "radial_equality") cfg.radial_equality = to_bool(path, val);
      else if (key == "samples") cfg.check_samples = to_list(path, val);
      else if (key == "ball_cx") cfg.ball.cx = to_number(path, val);
      else if (key == "ball_cy") cfg.ball.cy = to_number(path, val);
      else if (key == "ball_r") cfg.ball.R = to_number(path, val);
      else if (key == "ball_s") cfg.ball.s = to_number(path, val);
      else throw ConfigError(path + ": unknown key");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = val;
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_number(path, val));
      else throw ConfigError(path + ": unknown key");
    } else {
      throw ConfigError(path + ": unknown section '" + section + "'");
    }
  }

  auto need = [&](const char* k, double fallback, bool has_fallback) {
    auto it = dom.find(k);
    if (it != dom.end()) return it->second;
    if (has_fallback) return fallback;
    throw ConfigError("domain." + std::string(k) + ": required for shape '" + shape + "'");
  };
  if (shape == "rectangle") {
    cfg.domain = RectSpec{need("x_min", 0, true), need("x_max", 1, true), need("y_min", 0, true),
                          need("y_max", 1, true)};
  } else if (shape == "annulus") {
    AnnulusSpec a{need("r_inner", 0, false), need("r_outer", 0, false), std::nullopt};
    if (dom.count("x_min"))
      a.box = RectSpec{need("x_min", 0, false), need("x_max", 0, false), need("y_min", 0, false),
                       need("y_max", 0, false)};
    cfg.domain = a;
  } else if (shape == "ball") {
    cfg.domain = BallSpec{need("cx", 0, true), need("cy", 0, true), need("radius", 1, false),
                          std::nullopt};
  } else if (shape == "sector") {
    cfg.domain = SectorSpec{need("c", 0, false), need("r_inner", 0, false),
                            need("r_outer", 0, false), std::nullopt};
  } else {
    throw ConfigError("domain.shape: unknown shape '" + shape + "'");
  }

  if (!(cfg.p > 1)) throw ConfigError("problem.p: must exceed 1 (got " + std::to_string(cfg.p) + ")");
  if (cfg.nx < 3 || cfg.ny < 3) throw ConfigError("domain.nx/ny: need at least 3 nodes per axis");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace pharmap
