#include "pharmap/field.hpp"

#include <cmath>
#include <stdexcept>

#include "pharmap/numerics.hpp"

namespace pharmap {

PlanarMap::PlanarMap(ScalarField a, ScalarField b, double p_)
    : u1(std::move(a)), u2(std::move(b)), p(p_) {
  if (u1.grid_ptr() != u2.grid_ptr()) throw std::invalid_argument("PlanarMap: components on different grids");
  if (!(p > 1.0)) throw std::invalid_argument("PlanarMap: exponent p must exceed 1");
}

namespace {

// One-dimensional first derivative along a lattice ray. Central where both
// neighbors are masked in, else one-sided second order.
double d1(const Grid2D& g, const std::vector<double>& v, int i, int j, int di, int dj, double h) {
  const bool mp = g.in(i + di, j + dj), mm = g.in(i - di, j - dj);
  auto V = [&](int a, int b) { return v[g.idx(a, b)]; };
  if (mp && mm) return (V(i + di, j + dj) - V(i - di, j - dj)) / (2 * h);
  if (mp && g.in(i + 2 * di, j + 2 * dj))
    return (-3 * V(i, j) + 4 * V(i + di, j + dj) - V(i + 2 * di, j + 2 * dj)) / (2 * h);
  if (mm && g.in(i - 2 * di, j - 2 * dj))
    return (3 * V(i, j) - 4 * V(i - di, j - dj) + V(i - 2 * di, j - 2 * dj)) / (2 * h);
  return kNaN;
}

double d2(const Grid2D& g, const std::vector<double>& v, int i, int j, int di, int dj, double h) {
  const bool mp = g.in(i + di, j + dj), mm = g.in(i - di, j - dj);
  auto V = [&](int a, int b) { return v[g.idx(a, b)]; };
  if (mp && mm) return (V(i + di, j + dj) - 2 * V(i, j) + V(i - di, j - dj)) / (h * h);
  if (mp && g.in(i + 2 * di, j + 2 * dj) && g.in(i + 3 * di, j + 3 * dj))
    return (2 * V(i, j) - 5 * V(i + di, j + dj) + 4 * V(i + 2 * di, j + 2 * dj) -
            V(i + 3 * di, j + 3 * dj)) /
           (h * h);
  if (mm && g.in(i - 2 * di, j - 2 * dj) && g.in(i - 3 * di, j - 3 * dj))
    return (2 * V(i, j) - 5 * V(i - di, j - dj) + 4 * V(i - 2 * di, j - 2 * dj) -
            V(i - 3 * di, j - 3 * dj)) /
           (h * h);
  return kNaN;
}

template <class F>
void for_masked(const Grid2D& g, F&& f) {
  parallel_for(g.ny(), [&](std::size_t jb, std::size_t je) {
    for (std::size_t j = jb; j < je; ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (g.in(i, static_cast<int>(j))) f(i, static_cast<int>(j));
  });
}

}  // namespace

GradientField gradient(const ScalarField& u) {
  const Grid2D& g = u.grid();
  GradientField out{ScalarField(u.grid_ptr()), ScalarField(u.grid_ptr())};
  for_masked(g, [&](int i, int j) {
    out.dx.at(i, j) = d1(g, u.values(), i, j, 1, 0, g.hx());
    out.dy.at(i, j) = d1(g, u.values(), i, j, 0, 1, g.hy());
  });
  return out;
}

HessianField hessian(const ScalarField& u) {
  const Grid2D& g = u.grid();
  HessianField out{ScalarField(u.grid_ptr()), ScalarField(u.grid_ptr()), ScalarField(u.grid_ptr())};
  // uxy as d/dy of the ux field: at interior this is the standard 4-point
  // cross stencil; at boundary it composes the one-sided rules.
  ScalarField ux(u.grid_ptr());
  for_masked(g, [&](int i, int j) { ux.at(i, j) = d1(g, u.values(), i, j, 1, 0, g.hx()); });
  for_masked(g, [&](int i, int j) {
    out.xx.at(i, j) = d2(g, u.values(), i, j, 1, 0, g.hx());
    out.yy.at(i, j) = d2(g, u.values(), i, j, 0, 1, g.hy());
    out.xy.at(i, j) = d1(g, ux.values(), i, j, 0, 1, g.hy());
  });
  return out;
}

ScalarField laplacian(const ScalarField& u) {
  const Grid2D& g = u.grid();
  ScalarField out(u.grid_ptr());
  for_masked(g, [&](int i, int j) {
    out.at(i, j) = d2(g, u.values(), i, j, 1, 0, g.hx()) + d2(g, u.values(), i, j, 0, 1, g.hy());
  });
  return out;
}

ScalarField divergence(const ScalarField& fx, const ScalarField& fy) {
  const Grid2D& g = fx.grid();
  ScalarField out(fx.grid_ptr());
  for_masked(g, [&](int i, int j) {
    out.at(i, j) =
        d1(g, fx.values(), i, j, 1, 0, g.hx()) + d1(g, fy.values(), i, j, 0, 1, g.hy());
  });
  return out;
}

ComplexField complex_gradient(const ScalarField& u) {
  const Grid2D& g = u.grid();
  ComplexField f(u.grid_ptr());
  auto grad = gradient(u);
  for_masked(g, [&](int i, int j) {
    f.at(i, j) = 0.5 * cplx(grad.dx.at(i, j), -grad.dy.at(i, j));
  });
  return f;
}

std::pair<ComplexField, ComplexField> wirtinger(const ComplexField& F) {
  const Grid2D& g = F.grid();
  ScalarField re(F.grid_ptr()), im(F.grid_ptr());
  for_masked(g, [&](int i, int j) {
    re.at(i, j) = F.at(i, j).real();
    im.at(i, j) = F.at(i, j).imag();
  });
  auto gre = gradient(re), gim = gradient(im);
  ComplexField Fz(F.grid_ptr()), Fzb(F.grid_ptr());
  for_masked(g, [&](int i, int j) {
    const cplx Fx(gre.dx.at(i, j), gim.dx.at(i, j));
    const cplx Fy(gre.dy.at(i, j), gim.dy.at(i, j));
    Fz.at(i, j) = 0.5 * (Fx - cplx(0, 1) * Fy);
    Fzb.at(i, j) = 0.5 * (Fx + cplx(0, 1) * Fy);
  });
  return {Fz, Fzb};
}

ScalarJet::ScalarJet(GridPtr g)
    : grid(std::move(g)),
      ux(grid->size(), kNaN),
      uy(grid->size(), kNaN),
      uxx(grid->size(), kNaN),
      uxy(grid->size(), kNaN),
      uyy(grid->size(), kNaN),
      defined(grid->size(), 0) {}

ScalarJet stencil_jet(const ScalarField& u) {
  const Grid2D& g = u.grid();
  ScalarJet jet(u.grid_ptr());
  parallel_for(g.ny(), [&](std::size_t jb, std::size_t je) {
    for (std::size_t jj = jb; jj < je; ++jj) {
      const int j = static_cast<int>(jj);
      for (int i = 0; i < g.nx(); ++i) {
        if (!g.interior(i, j)) continue;
        const std::size_t k = g.idx(i, j);
        auto V = [&](int a, int b) { return u.at(a, b); };
        jet.ux[k] = (V(i + 1, j) - V(i - 1, j)) / (2 * g.hx());
        jet.uy[k] = (V(i, j + 1) - V(i, j - 1)) / (2 * g.hy());
        jet.uxx[k] = (V(i + 1, j) - 2 * V(i, j) + V(i - 1, j)) / (g.hx() * g.hx());
        jet.uyy[k] = (V(i, j + 1) - 2 * V(i, j) + V(i, j - 1)) / (g.hy() * g.hy());
        jet.uxy[k] = (V(i + 1, j + 1) - V(i - 1, j + 1) - V(i + 1, j - 1) + V(i - 1, j - 1)) /
                     (4 * g.hx() * g.hy());
        jet.defined[k] = std::isfinite(jet.ux[k]) && std::isfinite(jet.uy[k]) &&
                         std::isfinite(jet.uxx[k]) && std::isfinite(jet.uxy[k]) &&
                         std::isfinite(jet.uyy[k]);
      }
    }
  });
  return jet;
}

ComplexJet::ComplexJet(GridPtr g)
    : grid(std::move(g)),
      f(grid->size(), cplx(kNaN, kNaN)),
      fz(grid->size(), cplx(kNaN, kNaN)),
      fzb(grid->size(), cplx(kNaN, kNaN)),
      defined(grid->size(), 0) {}

ComplexJet complex_jet(const ScalarJet& j) {
  ComplexJet out(j.grid);
  const std::size_t n = j.grid->size();
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      if (!j.defined[k]) continue;
      out.f[k] = 0.5 * cplx(j.ux[k], -j.uy[k]);
      out.fz[k] = 0.25 * cplx(j.uxx[k] - j.uyy[k], -2 * j.uxy[k]);
      out.fzb[k] = 0.25 * cplx(j.uxx[k] + j.uyy[k], 0.0);
      out.defined[k] = 1;
    }
  });
  return out;
}

MapJets stencil_jets(const PlanarMap& u) { return {stencil_jet(u.u1), stencil_jet(u.u2)}; }

double bilinear_raw(const Grid2D& g, const std::vector<double>& v, double x, double y) {
  double fx = (x - g.x_min()) / g.hx();
  double fy = (y - g.y_min()) / g.hy();
  int i = static_cast<int>(std::floor(fx));
  int j = static_cast<int>(std::floor(fy));
  i = std::max(0, std::min(g.nx() - 2, i));
  j = std::max(0, std::min(g.ny() - 2, j));
  const double tx = fx - i, ty = fy - j;
  const double v00 = v[g.idx(i, j)], v10 = v[g.idx(i + 1, j)];
  const double v01 = v[g.idx(i, j + 1)], v11 = v[g.idx(i + 1, j + 1)];
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

double bilinear(const ScalarField& f, double x, double y) {
  return bilinear_raw(f.grid(), f.values(), x, y);
}

ScalarField dilate_nearest(const ScalarField& f, int passes) {
  const Grid2D& g = f.grid();
  ScalarField cur = f;
  for (int pass = 0; pass < passes; ++pass) {
    ScalarField next = cur;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!g.in(i, j) || std::isfinite(cur.at(i, j))) continue;
        double acc = 0;
        int n = 0;
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int ii = i + di[d], jj = j + dj[d];
          if (ii < 0 || jj < 0 || ii >= g.nx() || jj >= g.ny()) continue;
          const double v = cur.at(ii, jj);
          if (std::isfinite(v)) {
            acc += v;
            ++n;
          }
        }
        if (n > 0) next.at(i, j) = acc / n;
      }
    cur = std::move(next);
  }
  return cur;
}

ScalarField restrict_to(const ScalarField& u, const GridPtr& coarse) {
  ScalarField out(coarse);
  for (int j = 0; j < coarse->ny(); ++j)
    for (int i = 0; i < coarse->nx(); ++i)
      if (coarse->in(i, j)) out.at(i, j) = u.at(2 * i, 2 * j);
  return out;
}

}  // namespace pharmap
