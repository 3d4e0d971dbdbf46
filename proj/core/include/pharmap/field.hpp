#pragma once

#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "pharmap/grid.hpp"

namespace pharmap {

using cplx = std::complex<double>;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Grid-sampled real function. Values at masked-out nodes are NaN.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid) : grid_(std::move(grid)), v_(grid_->size(), kNaN) {}

  const Grid2D& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double& at(int i, int j) { return v_[grid_->idx(i, j)]; }
  double at(int i, int j) const { return v_[grid_->idx(i, j)]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

 private:
  GridPtr grid_;
  std::vector<double> v_;
};

class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(GridPtr grid) : grid_(std::move(grid)), v_(grid_->size(), cplx(kNaN, kNaN)) {}

  const Grid2D& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  cplx& at(int i, int j) { return v_[grid_->idx(i, j)]; }
  cplx at(int i, int j) const { return v_[grid_->idx(i, j)]; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

 private:
  GridPtr grid_;
  std::vector<cplx> v_;
};

/// Pair (u1, u2) on a shared grid with the exponent p of the energy.
struct PlanarMap {
  ScalarField u1, u2;
  double p = 2.0;

  PlanarMap() = default;
  PlanarMap(ScalarField a, ScalarField b, double p_);
};

struct GradientField {
  ScalarField dx, dy;
};
struct HessianField {
  ScalarField xx, xy, yy;
};

/// Central differences at interior nodes, one-sided second-order at boundary
/// nodes. Exact on quadratics everywhere. Undefined entries come back NaN.
GradientField gradient(const ScalarField& u);
HessianField hessian(const ScalarField& u);
ScalarField laplacian(const ScalarField& u);
ScalarField divergence(const ScalarField& fx, const ScalarField& fy);

/// f = (u_x - i u_y)/2 at masked-in nodes.
ComplexField complex_gradient(const ScalarField& u);

/// Wirtinger derivatives of a complex field: (F_z, F_zbar) with
/// F_z = (F_x - i F_y)/2, F_zbar = (F_x + i F_y)/2.
std::pair<ComplexField, ComplexField> wirtinger(const ComplexField& F);

/// Per-node derivative jet (ux, uy, uxx, uxy, uyy). Downstream curvature and
/// coefficient-matrix evaluations consume jets so that stencil and analytic
/// inputs share one code path.
struct ScalarJet {
  GridPtr grid;
  std::vector<double> ux, uy, uxx, uxy, uyy;
  std::vector<std::uint8_t> defined;

  explicit ScalarJet(GridPtr g);
  ScalarJet() = default;
};

/// Jet from finite differences; defined at interior nodes only (boundary
/// stencils degrade the algebraic identities downstream ops rely on).
ScalarJet stencil_jet(const ScalarField& u);

/// Complex gradient jet: f, f_z, f_zbar per node, algebraically derived from
/// a scalar jet (f_z = (uxx - uyy - 2i uxy)/4, f_zbar = (uxx + uyy)/4).
struct ComplexJet {
  GridPtr grid;
  std::vector<cplx> f, fz, fzb;
  std::vector<std::uint8_t> defined;

  explicit ComplexJet(GridPtr g);
  ComplexJet() = default;
};

ComplexJet complex_jet(const ScalarJet& j);

struct MapJets {
  ScalarJet j1, j2;
};
MapJets stencil_jets(const PlanarMap& u);

/// Bilinear interpolation of node values at (x, y); NaN when the enclosing
/// cell has an undefined corner.
double bilinear(const ScalarField& f, double x, double y);
double bilinear_raw(const Grid2D& g, const std::vector<double>& v, double x, double y);

/// Restriction of u onto coarsen(grid); used for stencil-error estimates.
ScalarField restrict_to(const ScalarField& u, const GridPtr& coarse);

/// Fill undefined (NaN) masked-in nodes from the average of defined
/// 4-neighbors, `passes` times. Lets line integrals run to the mask edge
/// where wide-stencil integrands are unavailable.
ScalarField dilate_nearest(const ScalarField& f, int passes);

}  // namespace pharmap
