#include "pharmap/levelcurve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace pharmap {

namespace {

using Edge = std::size_t;  // node_idx * 2 + (0: x-edge to (i+1,j), 1: y-edge to (i,j+1))
using Pt = std::array<double, 2>;

struct Segment {
  Edge a, b;
};

Pt edge_point(const Grid2D& g, const std::vector<double>& v, Edge e, double s) {
  const std::size_t node = e / 2;
  const int i = static_cast<int>(node % g.nx());
  const int j = static_cast<int>(node / g.nx());
  const bool xdir = (e % 2) == 0;
  const double v0 = v[node];
  const double v1 = xdir ? v[g.idx(i + 1, j)] : v[g.idx(i, j + 1)];
  const double t = (s - v0) / (v1 - v0);
  return xdir ? Pt{g.x(i) + t * g.hx(), g.y(j)} : Pt{g.x(i), g.y(j) + t * g.hy()};
}

double dist(const Pt& a, const Pt& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

}  // namespace

std::vector<LevelCurve> extract_level(const ScalarField& u, double s) {
  const Grid2D& g = u.grid();
  const auto& v = u.values();
  std::vector<Segment> segs;

  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      if (!g.cell_in(i, j)) continue;
      const double va = v[g.idx(i, j)], vb = v[g.idx(i + 1, j)];
      const double vc = v[g.idx(i + 1, j + 1)], vd = v[g.idx(i, j + 1)];
      if (!std::isfinite(va) || !std::isfinite(vb) || !std::isfinite(vc) || !std::isfinite(vd))
        continue;
      // nodes exactly on the level count as "above"
      const int code = (va >= s ? 1 : 0) | (vb >= s ? 2 : 0) | (vc >= s ? 4 : 0) | (vd >= s ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const Edge ab = g.idx(i, j) * 2, bc = g.idx(i + 1, j) * 2 + 1;
      const Edge cd = g.idx(i, j + 1) * 2, da = g.idx(i, j) * 2 + 1;
      auto emit = [&](Edge e1, Edge e2) { segs.push_back({e1, e2}); };
      switch (code) {
        case 1: emit(da, ab); break;
        case 2: emit(ab, bc); break;
        case 3: emit(da, bc); break;
        case 4: emit(bc, cd); break;
        case 6: emit(ab, cd); break;
        case 7: emit(da, cd); break;
        case 8: emit(cd, da); break;
        case 9: emit(ab, cd); break;
        case 11: emit(bc, cd); break;
        case 12: emit(bc, da); break;
        case 13: emit(ab, bc); break;
        case 14: emit(ab, da); break;
        case 5:  // A,C above: split by the cell-center average
          if (0.25 * (va + vb + vc + vd) >= s) {
            emit(ab, bc);
            emit(cd, da);
          } else {
            emit(da, ab);
            emit(bc, cd);
          }
          break;
        case 10:  // B,D above
          if (0.25 * (va + vb + vc + vd) >= s) {
            emit(da, ab);
            emit(bc, cd);
          } else {
            emit(ab, bc);
            emit(cd, da);
          }
          break;
        default: break;
      }
    }
  }

  // chain segments into maximal polylines; each crossing has degree <= 2
  std::map<Edge, std::array<int, 2>> adj;
  for (std::size_t sid = 0; sid < segs.size(); ++sid) {
    for (Edge e : {segs[sid].a, segs[sid].b}) {
      auto [it, fresh] = adj.try_emplace(e, std::array<int, 2>{-1, -1});
      auto& slots = it->second;
      (void)fresh;
      if (slots[0] < 0)
        slots[0] = static_cast<int>(sid);
      else if (slots[1] < 0)
        slots[1] = static_cast<int>(sid);
    }
  }

  std::vector<bool> used(segs.size(), false);
  std::vector<LevelCurve> curves;

  auto walk = [&](Edge start, int first_seg) {
    std::vector<Edge> chain{start};
    Edge cur = start;
    int sid = first_seg;
    while (sid >= 0 && !used[sid]) {
      used[sid] = true;
      const Edge nxt = segs[sid].a == cur ? segs[sid].b : segs[sid].a;
      chain.push_back(nxt);
      cur = nxt;
      const auto& slots = adj[cur];
      sid = -1;
      for (int cand : slots)
        if (cand >= 0 && !used[cand]) sid = cand;
    }
    return chain;
  };

  auto finish = [&](std::vector<Edge> chain) {
    const bool closed = chain.size() > 2 && chain.front() == chain.back();
    if (closed) {
      chain.pop_back();
      // canonical rotation: smallest edge key first, smaller neighbor next
      const auto mn = std::min_element(chain.begin(), chain.end());
      std::rotate(chain.begin(), mn, chain.end());
      if (chain.size() > 2 && chain.back() < chain[1])
        std::reverse(chain.begin() + 1, chain.end());
    } else if (chain.back() < chain.front()) {
      std::reverse(chain.begin(), chain.end());
    }
    LevelCurve c;
    c.level = s;
    c.closed = closed;
    for (Edge e : chain) {
      Pt pt = edge_point(u.grid(), v, e, s);
      if (!c.vertices.empty() && dist(c.vertices.back(), pt) == 0.0) continue;
      c.vertices.push_back(pt);
    }
    if (closed && c.vertices.size() > 1 && dist(c.vertices.front(), c.vertices.back()) == 0.0)
      c.vertices.pop_back();
    for (std::size_t k = 0; k + 1 < c.vertices.size(); ++k)
      c.total_length += dist(c.vertices[k], c.vertices[k + 1]);
    if (closed && c.vertices.size() > 1)
      c.total_length += dist(c.vertices.back(), c.vertices.front());
    if (c.vertices.size() > 1) curves.push_back(std::move(c));
  };

  // open chains first (deterministic: ordered map scan), then leftover loops
  for (const auto& [e, slots] : adj)
    if (slots[1] < 0 && slots[0] >= 0 && !used[slots[0]]) finish(walk(e, slots[0]));
  for (const auto& [e, slots] : adj)
    for (int sid : slots)
      if (sid >= 0 && !used[sid]) finish(walk(e, sid));

  return curves;
}

bool attach_curve_samples(LevelCurve& curve, const ScalarField& grad_norm_field,
                          const ScalarField& k_field) {
  curve.grad_norm.clear();
  curve.curvature.clear();
  bool ok = true;
  for (const auto& p : curve.vertices) {
    const double gn = bilinear(grad_norm_field, p[0], p[1]);
    const double kv = bilinear(k_field, p[0], p[1]);
    if (!std::isfinite(gn) || !std::isfinite(kv)) ok = false;
    curve.grad_norm.push_back(gn);
    curve.curvature.push_back(kv);
  }
  return ok;
}

namespace {

// bilinear over the defined corners of the enclosing cell, weights
// renormalized; lets integrals run up to the mask boundary where one-ring
// jet values are unavailable (singular levels are rejected by the callers)
double interp_defined(const ScalarField& f, double x, double y) {
  const Grid2D& g = f.grid();
  double fx = (x - g.x_min()) / g.hx();
  double fy = (y - g.y_min()) / g.hy();
  int i = std::max(0, std::min(g.nx() - 2, static_cast<int>(std::floor(fx))));
  int j = std::max(0, std::min(g.ny() - 2, static_cast<int>(std::floor(fy))));
  const double tx = fx - i, ty = fy - j;
  const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
  const double v[4] = {f.at(i, j), f.at(i + 1, j), f.at(i, j + 1), f.at(i + 1, j + 1)};
  double acc = 0, wsum = 0, sum = 0;
  int defined = 0;
  for (int c = 0; c < 4; ++c)
    if (std::isfinite(v[c])) {
      acc += w[c] * v[c];
      wsum += w[c];
      sum += v[c];
      ++defined;
    }
  if (wsum > 0) return acc / wsum;
  // point sits on a lattice line whose defined corners carry zero weight
  return defined > 0 ? sum / defined : kNaN;
}

}  // namespace

LineIntegral line_integral(const LevelCurve& curve, const ScalarField& field) {
  LineIntegral res;
  if (curve.vertices.size() < 2) return res;
  std::vector<double> fv(curve.vertices.size());
  for (std::size_t k = 0; k < curve.vertices.size(); ++k) {
    fv[k] = interp_defined(field, curve.vertices[k][0], curve.vertices[k][1]);
    if (!std::isfinite(fv[k])) return res;  // no usable data near this vertex
  }
  double acc = 0;
  const std::size_t n = curve.vertices.size();
  const std::size_t m = curve.closed ? n : n - 1;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t k2 = (k + 1) % n;
    acc += 0.5 * (fv[k] + fv[k2]) * dist(curve.vertices[k], curve.vertices[k2]);
  }
  res.value = acc;
  res.ok = true;
  return res;
}

LineIntegral line_integral(const std::vector<LevelCurve>& curves, const ScalarField& field) {
  LineIntegral total;
  total.ok = true;
  for (const auto& c : curves) {
    const auto r = line_integral(c, field);
    if (!r.ok) return {0, false};
    total.value += r.value;
  }
  return total;
}

double length_in_ball(const std::vector<LevelCurve>& curves, double cx, double cy, double R) {
  double total = 0;
  auto clipped = [&](const Pt& a, const Pt& b) {
    // |a + t(b-a) - c|^2 = R^2, keep the sub-interval of [0,1] inside
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double fx = a[0] - cx, fy = a[1] - cy;
    const double A = dx * dx + dy * dy;
    if (A == 0) return 0.0;
    const double B = 2 * (fx * dx + fy * dy);
    const double C = fx * fx + fy * fy - R * R;
    const double disc = B * B - 4 * A * C;
    double t0 = 0, t1 = 1;
    if (disc <= 0) {
      if (C > 0) return 0.0;  // fully outside
    } else {
      const double r0 = (-B - std::sqrt(disc)) / (2 * A);
      const double r1 = (-B + std::sqrt(disc)) / (2 * A);
      t0 = std::max(0.0, r0);
      t1 = std::min(1.0, r1);
      if (t1 <= t0) return 0.0;
    }
    return (t1 - t0) * std::sqrt(A);
  };
  for (const auto& c : curves) {
    const std::size_t n = c.vertices.size();
    if (n < 2) continue;
    const std::size_t m = c.closed ? n : n - 1;
    for (std::size_t k = 0; k < m; ++k) total += clipped(c.vertices[k], c.vertices[(k + 1) % n]);
  }
  return total;
}

void write_curves_csv(const std::string& path, const std::vector<LevelCurve>& curves) {
  std::ofstream out(path);
  out << "# level curves {u = s}; per-vertex samples of |grad u| and k = -div(grad u/|grad u|)\n";
  out << "curve,level,closed,vertex,x,y,grad_norm,k\n";
  char buf[256];
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& cv = curves[c];
    for (std::size_t k = 0; k < cv.vertices.size(); ++k) {
      const double gn = k < cv.grad_norm.size() ? cv.grad_norm[k] : kNaN;
      const double kv = k < cv.curvature.size() ? cv.curvature[k] : kNaN;
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%d,%zu,%.17g,%.17g,%.17g,%.17g\n", c, cv.level,
                    cv.closed ? 1 : 0, k, cv.vertices[k][0], cv.vertices[k][1], gn, kv);
      out << buf;
    }
  }
}

void write_curves_svg(const std::string& path, const Grid2D& grid,
                      const std::vector<LevelCurve>& curves) {
  std::ofstream out(path);
  char buf[256];
  const double w = grid.x_max() - grid.x_min(), h = grid.y_max() - grid.y_min();
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.17g %.17g %.17g %.17g\">\n",
                grid.x_min(), -grid.y_max(), w, h);
  out << buf;
  out << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\""
      << 0.004 * std::max(w, h) << "\">\n";
  for (const auto& c : curves) {
    out << "<path data-level=\"";
    std::snprintf(buf, sizeof buf, "%.17g", c.level);
    out << buf << "\" d=\"";
    for (std::size_t k = 0; k < c.vertices.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%c%.8g %.8g", k == 0 ? 'M' : 'L', c.vertices[k][0],
                    c.vertices[k][1]);
      out << buf;
    }
    if (c.closed) out << "Z";
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

}  // namespace pharmap
