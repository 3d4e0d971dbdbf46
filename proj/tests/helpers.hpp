#pragma once

#include <cmath>
#include <doctest.h>

#include "pharmap/families.hpp"
#include "pharmap/field.hpp"
#include "pharmap/grid.hpp"

namespace pharmap::test {

inline GridPtr unit_square(int n) { return make_grid(RectSpec{0, 1, 0, 1}, n, n); }

inline GridPtr square(double half, int n) {
  return make_grid(RectSpec{-half, half, -half, half}, n, n);
}

inline GridPtr annulus_grid(double r0, double r1, double half, int n) {
  return make_grid(AnnulusSpec{r0, r1, RectSpec{-half, half, -half, half}}, n, n);
}

/// max |a - b| over nodes where both fields are finite; counts such nodes.
struct FieldDiff {
  double max_abs = 0;
  std::size_t nodes = 0;
};

inline FieldDiff max_diff(const ScalarField& a, const ScalarField& b) {
  FieldDiff d;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    const double va = a.values()[k], vb = b.values()[k];
    if (!std::isfinite(va) || !std::isfinite(vb)) continue;
    ++d.nodes;
    d.max_abs = std::max(d.max_abs, std::fabs(va - vb));
  }
  return d;
}

inline double max_abs_error(const ScalarField& f, const AnalyticScalar& exact) {
  const Grid2D& g = f.grid();
  double m = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double v = f.at(i, j);
      if (!std::isfinite(v)) continue;
      m = std::max(m, std::fabs(v - exact.value(g.x(i), g.y(j))));
    }
  return m;
}

inline double max_finite(const ScalarField& f) {
  double m = 0;
  for (double v : f.values())
    if (std::isfinite(v)) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace pharmap::test
