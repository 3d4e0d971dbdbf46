#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace pharmap {

enum class NodeState : std::uint8_t { Outside = 0, Boundary = 1, Interior = 2 };

struct RectSpec {
  double x_min, x_max, y_min, y_max;
};

/// Circular annulus r_inner < r < r_outer about the origin.
struct AnnulusSpec {
  double r_inner, r_outer;
  std::optional<RectSpec> box;  // default [-r_outer, r_outer]^2
};

struct BallSpec {
  double cx = 0, cy = 0;
  double radius = 1;
  std::optional<RectSpec> box;
};

/// First-quadrant wedge {y^2 < x^2 < c*y^2} clipped to r_inner < r < r_outer.
/// Requires c > 1; the wedge hugs the diagonal x = y.
struct SectorSpec {
  double c;
  double r_inner, r_outer;
  std::optional<RectSpec> box;  // default: tight box around the wedge
};

using DomainSpec = std::variant<RectSpec, AnnulusSpec, BallSpec, SectorSpec>;

/// Uniform axis-aligned lattice with a tri-state membership mask.
/// Interior nodes have all 8 neighbors in the mask; boundary nodes are
/// masked-in nodes adjacent to an outside node or the lattice edge.
class Grid2D {
 public:
  Grid2D(const RectSpec& bounds, int nx, int ny, std::vector<std::uint8_t> inside);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x_min() const { return bounds_.x_min; }
  double x_max() const { return bounds_.x_max; }
  double y_min() const { return bounds_.y_min; }
  double y_max() const { return bounds_.y_max; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double x(int i) const { return bounds_.x_min + i * hx_; }
  double y(int j) const { return bounds_.y_min + j * hy_; }

  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

  NodeState state(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return NodeState::Outside;
    return mask_[idx(i, j)];
  }
  bool in(int i, int j) const { return state(i, j) != NodeState::Outside; }
  bool interior(int i, int j) const { return state(i, j) == NodeState::Interior; }

  const std::vector<NodeState>& mask() const { return mask_; }
  std::size_t count(NodeState s) const;

  /// Trapezoid-style quadrature weight: hx*hy * (adjacent in-mask cells)/4.
  /// Exactly the trapezoid rule on full rectangles, O(h^2) for smooth
  /// integrands on masked domains.
  double node_weight(int i, int j) const;
  /// A lattice cell is "in" when all four of its corners are masked in.
  bool cell_in(int i, int j) const;

 private:
  RectSpec bounds_;
  int nx_, ny_;
  double hx_, hy_;
  std::vector<NodeState> mask_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

GridPtr make_grid(const DomainSpec& spec, int nx, int ny);

/// Subsample every other node (odd nx, ny only): same extents, spacing 2h.
/// Used to estimate stencil-error scales from a refinement pair.
GridPtr coarsen(const Grid2D& g);

}  // namespace pharmap
