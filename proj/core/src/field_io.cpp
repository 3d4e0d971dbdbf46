#include "pharmap/field_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pharmap/errors.hpp"

namespace pharmap {

using nlohmann::json;

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_json(const std::string& path, const Grid2D& g) {
  json rle = json::array();
  int run_state = static_cast<int>(g.mask()[0]);
  std::size_t run_len = 0;
  for (auto st : g.mask()) {
    if (static_cast<int>(st) == run_state) {
      ++run_len;
    } else {
      rle.push_back({run_state, run_len});
      run_state = static_cast<int>(st);
      run_len = 1;
    }
  }
  rle.push_back({run_state, run_len});
  json j{{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"y_min", g.y_min()},
         {"y_max", g.y_max()}, {"nx", g.nx()},       {"ny", g.ny()},
         {"mask_rle", rle}};
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

GridPtr read_grid_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("grid header: cannot open '" + path + "'");
  json j;
  in >> j;
  const int nx = j.at("nx"), ny = j.at("ny");
  std::vector<std::uint8_t> inside;
  inside.reserve(static_cast<std::size_t>(nx) * ny);
  for (const auto& run : j.at("mask_rle")) {
    const int state = run.at(0);
    const std::size_t len = run.at(1);
    for (std::size_t k = 0; k < len; ++k) inside.push_back(state != 0 ? 1 : 0);
  }
  if (inside.size() != static_cast<std::size_t>(nx) * ny)
    throw ConfigError("grid header: mask_rle length mismatch in '" + path + "'");
  RectSpec b{j.at("x_min"), j.at("x_max"), j.at("y_min"), j.at("y_max")};
  return std::make_shared<Grid2D>(b, nx, ny, std::move(inside));
}

void write_fields_csv(const std::string& path,
                      const std::vector<std::pair<std::string, const ScalarField*>>& fields,
                      const std::string& comment) {
  std::ofstream out(path);
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "x,y";
  for (const auto& [name, f] : fields) out << "," << name;
  out << "\n";
  if (fields.empty()) return;
  const Grid2D& g = fields.front().second->grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.in(i, j)) continue;
      out << fmt_g17(g.x(i)) << "," << fmt_g17(g.y(j));
      for (const auto& [name, f] : fields) out << "," << fmt_g17(f->at(i, j));
      out << "\n";
    }
}

std::vector<std::pair<std::string, ScalarField>> read_fields_csv(const std::string& path,
                                                                 const GridPtr& grid) {
  std::ifstream in(path);
  if (!in) throw ConfigError("field csv: cannot open '" + path + "'");
  std::string line;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) names.push_back(tok);
    break;
  }
  if (names.size() < 3 || names[0] != "x" || names[1] != "y")
    throw ConfigError("field csv: malformed header in '" + path + "'");
  std::vector<std::pair<std::string, ScalarField>> out;
  for (std::size_t k = 2; k < names.size(); ++k) out.emplace_back(names[k], ScalarField(grid));

  const Grid2D& g = *grid;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::strtod(tok.c_str(), nullptr));
    if (vals.size() != names.size())
      throw ConfigError("field csv: row width mismatch in '" + path + "'");
    const int i = static_cast<int>(std::lround((vals[0] - g.x_min()) / g.hx()));
    const int j = static_cast<int>(std::lround((vals[1] - g.y_min()) / g.hy()));
    if (i < 0 || j < 0 || i >= g.nx() || j >= g.ny())
      throw ConfigError("field csv: node outside grid in '" + path + "'");
    for (std::size_t k = 2; k < vals.size(); ++k) out[k - 2].second.at(i, j) = vals[k];
  }
  return out;
}

void write_map(const std::string& dir, const std::string& stem, const PlanarMap& u) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_grid_json((fs::path(dir) / (stem + "_grid.json")).string(), u.u1.grid());
  write_fields_csv((fs::path(dir) / (stem + ".csv")).string(),
                   {{"u1", &u.u1}, {"u2", &u.u2}},
                   "planar p-harmonic map (u1, u2): div(|Du|^{p-2} grad u^i) = 0; p = " +
                       fmt_g17(u.p));
}

PlanarMap read_map(const std::string& dir, const std::string& stem) {
  namespace fs = std::filesystem;
  auto grid = read_grid_json((fs::path(dir) / (stem + "_grid.json")).string());
  auto cols = read_fields_csv((fs::path(dir) / (stem + ".csv")).string(), grid);
  const ScalarField* u1 = nullptr;
  const ScalarField* u2 = nullptr;
  for (const auto& [name, f] : cols) {
    if (name == "u1") u1 = &f;
    if (name == "u2") u2 = &f;
  }
  if (!u1 || !u2) throw ConfigError("map artifact: u1/u2 columns missing in '" + dir + "'");

  // p is recorded in the csv comment line
  std::ifstream in((fs::path(dir) / (stem + ".csv")).string());
  std::string line;
  double p = 2.0;
  if (std::getline(in, line)) {
    const auto pos = line.find("p = ");
    if (pos != std::string::npos) p = std::strtod(line.c_str() + pos + 4, nullptr);
  }
  return PlanarMap(*u1, *u2, p);
}

}  // namespace pharmap
