#pragma once

#include <array>
#include <string>
#include <vector>

#include "pharmap/field.hpp"

namespace pharmap {

/// Oriented polyline of the level set {u = s}, assembled from per-cell
/// marching-squares segments. Open curves terminate where the level leaves
/// the masked region.
struct LevelCurve {
  double level = 0;
  bool closed = false;
  std::vector<std::array<double, 2>> vertices;
  double total_length = 0;
  // optional per-vertex samples (filled by attach_curve_samples)
  std::vector<double> grad_norm, curvature;
};

/// Marching squares with linear edge interpolation; ambiguous saddle cells
/// are resolved by the cell-center average. Deterministic: canonical vertex
/// order, cells scanned row-major.
std::vector<LevelCurve> extract_level(const ScalarField& u, double s);

/// Bilinear samples of |grad u| and k = -div(grad u/|grad u|) at the curve
/// vertices; returns false when a vertex touches undefined jet nodes.
bool attach_curve_samples(LevelCurve& curve, const ScalarField& grad_norm_field,
                          const ScalarField& k_field);

struct LineIntegral {
  double value = 0;
  bool ok = false;
};

/// Trapezoid rule along the polyline of the bilinear interpolant of `field`.
LineIntegral line_integral(const LevelCurve& curve, const ScalarField& field);
LineIntegral line_integral(const std::vector<LevelCurve>& curves, const ScalarField& field);

/// Total length of the parts of the curves inside the disk |z - c| < R
/// (segments are clipped exactly against the circle).
double length_in_ball(const std::vector<LevelCurve>& curves, double cx, double cy, double R);

void write_curves_csv(const std::string& path, const std::vector<LevelCurve>& curves);
void write_curves_svg(const std::string& path, const Grid2D& grid,
                      const std::vector<LevelCurve>& curves);

}  // namespace pharmap
