#pragma once

#include <string>
#include <vector>

#include "pharmap/field.hpp"

namespace pharmap {

/// Self-describing grid header: extents, node counts, and the tri-state mask
/// as run-length pairs over the row-major scan.
void write_grid_json(const std::string& path, const Grid2D& g);
GridPtr read_grid_json(const std::string& path);

/// One row per masked-in node: x, y, then one column per named field.
/// A leading comment line documents the columns.
void write_fields_csv(const std::string& path,
                      const std::vector<std::pair<std::string, const ScalarField*>>& fields,
                      const std::string& comment = "");
/// Reads columns written by write_fields_csv back onto `grid` (by name).
std::vector<std::pair<std::string, ScalarField>> read_fields_csv(const std::string& path,
                                                                 const GridPtr& grid);

void write_map(const std::string& dir, const std::string& stem, const PlanarMap& u);
PlanarMap read_map(const std::string& dir, const std::string& stem);

/// Fixed "%.17g" formatting shared by all writers (byte-stable artifacts).
std::string fmt_g17(double v);

}  // namespace pharmap
