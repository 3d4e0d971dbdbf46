#include "pharmap/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pharmap {

Grid2D::Grid2D(const RectSpec& bounds, int nx, int ny, std::vector<std::uint8_t> inside)
    : bounds_(bounds), nx_(nx), ny_(ny) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("grid: need at least 3 nodes per axis");
  if (!(bounds.x_min < bounds.x_max) || !(bounds.y_min < bounds.y_max))
    throw std::invalid_argument("grid: degenerate extent (min >= max)");
  if (inside.size() != size()) throw std::invalid_argument("grid: mask size mismatch");
  hx_ = (bounds.x_max - bounds.x_min) / (nx - 1);
  hy_ = (bounds.y_max - bounds.y_min) / (ny - 1);

  mask_.assign(size(), NodeState::Outside);
  std::size_t n_interior = 0;
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (!inside[idx(i, j)]) continue;
      bool edge = false;
      for (int dj = -1; dj <= 1 && !edge; ++dj)
        for (int di = -1; di <= 1 && !edge; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nx_ || jj >= ny_ || !inside[idx(ii, jj)]) edge = true;
        }
      mask_[idx(i, j)] = edge ? NodeState::Boundary : NodeState::Interior;
      if (!edge) ++n_interior;
    }
  }
  if (n_interior == 0) throw std::invalid_argument("grid: empty interior after masking");
}

std::size_t Grid2D::count(NodeState s) const {
  std::size_t c = 0;
  for (auto m : mask_)
    if (m == s) ++c;
  return c;
}

bool Grid2D::cell_in(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ - 1 || j >= ny_ - 1) return false;
  return in(i, j) && in(i + 1, j) && in(i, j + 1) && in(i + 1, j + 1);
}

double Grid2D::node_weight(int i, int j) const {
  if (!in(i, j)) return 0.0;
  int cells = 0;
  for (int dj = -1; dj <= 0; ++dj)
    for (int di = -1; di <= 0; ++di)
      if (cell_in(i + di, j + dj)) ++cells;
  return hx_ * hy_ * cells / 4.0;
}

namespace {

RectSpec sector_box(const SectorSpec& s) {
  // On the wedge y^2 < x^2 < c y^2:  r^2/2 <= x^2 <= r^2 c/(1+c),
  //                                  r^2/(1+c) <= y^2 <= r^2/2.
  const double pad = 0.02 * (s.r_outer - s.r_inner);
  const double x_lo = s.r_inner / std::sqrt(2.0);
  const double x_hi = s.r_outer * std::sqrt(s.c / (1.0 + s.c));
  const double y_lo = s.r_inner / std::sqrt(1.0 + s.c);
  const double y_hi = s.r_outer / std::sqrt(2.0);
  return {x_lo - pad, x_hi + pad, y_lo - pad, y_hi + pad};
}

struct MaskBuilder {
  RectSpec bounds;
  std::vector<std::uint8_t> inside;
};

MaskBuilder build(const DomainSpec& spec, int nx, int ny) {
  MaskBuilder mb;
  if (const auto* r = std::get_if<RectSpec>(&spec)) {
    mb.bounds = *r;
    mb.inside.assign(static_cast<std::size_t>(nx) * ny, 1);
    return mb;
  }
  if (const auto* a = std::get_if<AnnulusSpec>(&spec)) {
    if (!(0.0 < a->r_inner && a->r_inner < a->r_outer))
      throw std::invalid_argument("annulus: need 0 < r_inner < r_outer");
    mb.bounds = a->box.value_or(RectSpec{-a->r_outer, a->r_outer, -a->r_outer, a->r_outer});
  } else if (const auto* b = std::get_if<BallSpec>(&spec)) {
    if (!(b->radius > 0)) throw std::invalid_argument("ball: radius must be positive");
    mb.bounds = b->box.value_or(
        RectSpec{b->cx - b->radius, b->cx + b->radius, b->cy - b->radius, b->cy + b->radius});
  } else {
    const auto& s = std::get<SectorSpec>(spec);
    if (!(s.c > 1.0)) throw std::invalid_argument("sector: aperture c must exceed 1");
    if (!(0.0 < s.r_inner && s.r_inner < s.r_outer))
      throw std::invalid_argument("sector: need 0 < r_inner < r_outer");
    mb.bounds = s.box.value_or(sector_box(s));
  }

  mb.inside.assign(static_cast<std::size_t>(nx) * ny, 0);
  const double hx = (mb.bounds.x_max - mb.bounds.x_min) / (nx - 1);
  const double hy = (mb.bounds.y_max - mb.bounds.y_min) / (ny - 1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = mb.bounds.x_min + i * hx;
      const double y = mb.bounds.y_min + j * hy;
      bool in = false;
      if (const auto* a = std::get_if<AnnulusSpec>(&spec)) {
        const double r = std::hypot(x, y);
        in = a->r_inner < r && r < a->r_outer;
      } else if (const auto* b = std::get_if<BallSpec>(&spec)) {
        in = std::hypot(x - b->cx, y - b->cy) < b->radius;
      } else {
        const auto& s = std::get<SectorSpec>(spec);
        const double r = std::hypot(x, y);
        in = x > 0 && y > 0 && y * y < x * x && x * x < s.c * y * y && s.r_inner < r &&
             r < s.r_outer;
      }
      if (in) mb.inside[static_cast<std::size_t>(j) * nx + i] = 1;
    }
  }
  return mb;
}

}  // namespace

GridPtr make_grid(const DomainSpec& spec, int nx, int ny) {
  auto mb = build(spec, nx, ny);
  return std::make_shared<Grid2D>(mb.bounds, nx, ny, std::move(mb.inside));
}

GridPtr coarsen(const Grid2D& g) {
  if (g.nx() % 2 == 0 || g.ny() % 2 == 0)
    throw std::invalid_argument("coarsen: odd node counts required");
  const int cnx = (g.nx() + 1) / 2, cny = (g.ny() + 1) / 2;
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(cnx) * cny, 0);
  for (int j = 0; j < cny; ++j)
    for (int i = 0; i < cnx; ++i)
      inside[static_cast<std::size_t>(j) * cnx + i] = g.in(2 * i, 2 * j) ? 1 : 0;
  RectSpec b{g.x_min(), g.x_max(), g.y_min(), g.y_max()};
  return std::make_shared<Grid2D>(b, cnx, cny, std::move(inside));
}

}  // namespace pharmap
