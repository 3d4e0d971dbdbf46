#include "pharmap/solver.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

#include "pharmap/numerics.hpp"

namespace pharmap {

namespace {

double grad_mag2(const ScalarJet& j, std::size_t k) {
  return j.ux[k] * j.ux[k] + j.uy[k] * j.uy[k];
}

}  // namespace

double energy(const PlanarMap& u, double epsilon_reg) {
  const Grid2D& g = u.u1.grid();
  auto g1 = gradient(u.u1), g2 = gradient(u.u2);
  std::vector<double> terms;
  terms.reserve(g.size());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.in(i, j)) continue;
      const double w = g.node_weight(i, j);
      if (w == 0.0) continue;
      const double q = g1.dx.at(i, j) * g1.dx.at(i, j) + g1.dy.at(i, j) * g1.dy.at(i, j) +
                       g2.dx.at(i, j) * g2.dx.at(i, j) + g2.dy.at(i, j) * g2.dy.at(i, j);
      terms.push_back(w * std::pow(q + epsilon_reg * epsilon_reg, u.p / 2));
    }
  }
  return pairwise_sum(terms);
}

// ---------------------------------------------------------------------------
// Discrete Dirichlet problem.
//
// The solver objective is the bilinear-cell (midpoint quadrature) energy
//   sum_cells (|Du|_cc^2 + eps^2)^{p/2} hx hy,
// with the cell-center gradient built from the four corners. The node-based
// central-difference sum leaves the odd-odd sublattice free to shift by a
// constant, so it is unusable as an objective; the cell form is coercive and
// its Hessian is positive definite for p > 1.
// ---------------------------------------------------------------------------

namespace {

struct Cell {
  int i, j;
  int dof[4];      // unknown index per corner (SW SE NW NE), -1 when fixed
  double fixed[8]; // boundary values (u1 then u2 per corner) where dof < 0
};

struct Problem {
  const Grid2D* g;
  double p, eps;
  double hx, hy, area;
  std::vector<Cell> cells;
  std::vector<int> node_of_dof;          // flat node index per unknown node
  std::vector<int> dof_of_node;          // -1 for non-interior
  std::vector<std::array<int, 4>> cells_of_node;  // cell ids around each unknown node

  std::size_t n_unknown_nodes() const { return node_of_dof.size(); }
  std::size_t n_dofs() const { return 2 * node_of_dof.size(); }
};

Problem build_problem(const PlanarMap& boundary) {
  const Grid2D& g = boundary.u1.grid();
  Problem pb;
  pb.g = &g;
  pb.p = boundary.p;
  pb.hx = g.hx();
  pb.hy = g.hy();
  pb.area = g.hx() * g.hy();
  pb.dof_of_node.assign(g.size(), -1);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (g.interior(i, j)) {
        pb.dof_of_node[g.idx(i, j)] = static_cast<int>(pb.node_of_dof.size());
        pb.node_of_dof.push_back(static_cast<int>(g.idx(i, j)));
      }

  pb.cells_of_node.assign(pb.node_of_dof.size(), {-1, -1, -1, -1});
  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      if (!g.cell_in(i, j)) continue;
      Cell c;
      c.i = i;
      c.j = j;
      const int corner_i[4] = {i, i + 1, i, i + 1};
      const int corner_j[4] = {j, j, j + 1, j + 1};
      bool touches_unknown = false;
      for (int k = 0; k < 4; ++k) {
        const std::size_t node = g.idx(corner_i[k], corner_j[k]);
        c.dof[k] = pb.dof_of_node[node];
        if (c.dof[k] >= 0) touches_unknown = true;
        c.fixed[k] = boundary.u1.values()[node];
        c.fixed[4 + k] = boundary.u2.values()[node];
      }
      if (!touches_unknown) continue;  // constant contribution only
      const int cid = static_cast<int>(pb.cells.size());
      pb.cells.push_back(c);
      for (int k = 0; k < 4; ++k)
        if (c.dof[k] >= 0) {
          auto& slots = pb.cells_of_node[c.dof[k]];
          for (int s = 0; s < 4; ++s)
            if (slots[s] < 0) {
              slots[s] = cid;
              break;
            }
        }
    }
  }
  return pb;
}

// Per-cell gradient state: gx, gy per component plus the weight derivatives.
struct CellState {
  double gx1, gy1, gx2, gy2, q, wp, wpp;  // wp = w'(q), wpp = w''(q)
};

inline void corner_values(const Cell& c, const std::vector<double>& x, double v1[4],
                          double v2[4]) {
  for (int k = 0; k < 4; ++k) {
    if (c.dof[k] >= 0) {
      v1[k] = x[2 * c.dof[k]];
      v2[k] = x[2 * c.dof[k] + 1];
    } else {
      v1[k] = c.fixed[k];
      v2[k] = c.fixed[4 + k];
    }
  }
}

// corners ordered SW SE NW NE: gx = (SE + NE - SW - NW)/(2hx), gy = (NW + NE - SW - SE)/(2hy)
inline const double* sign_x() {
  static const double s[4] = {-1, 1, -1, 1};
  return s;
}
inline const double* sign_y() {
  static const double s[4] = {-1, -1, 1, 1};
  return s;
}

void cell_states(const Problem& pb, const std::vector<double>& x, double eps,
                 std::vector<CellState>& st, bool second_order) {
  st.resize(pb.cells.size());
  parallel_for(pb.cells.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t cid = b; cid < e; ++cid) {
      const Cell& c = pb.cells[cid];
      double v1[4], v2[4];
      corner_values(c, x, v1, v2);
      CellState s;
      s.gx1 = (v1[1] + v1[3] - v1[0] - v1[2]) / (2 * pb.hx);
      s.gy1 = (v1[2] + v1[3] - v1[0] - v1[1]) / (2 * pb.hy);
      s.gx2 = (v2[1] + v2[3] - v2[0] - v2[2]) / (2 * pb.hx);
      s.gy2 = (v2[2] + v2[3] - v2[0] - v2[1]) / (2 * pb.hy);
      s.q = s.gx1 * s.gx1 + s.gy1 * s.gy1 + s.gx2 * s.gx2 + s.gy2 * s.gy2;
      const double t = s.q + eps * eps;
      const double p = pb.p;
      if (t == 0.0) {
        s.wp = 0.0;  // limits of w'(q), w''(q) q -> 0 contributions
        s.wpp = 0.0;
      } else {
        s.wp = 0.5 * p * std::pow(t, 0.5 * p - 1.0);
        s.wpp = second_order ? 0.25 * p * (p - 2.0) * std::pow(t, 0.5 * p - 2.0) : 0.0;
      }
      st[cid] = s;
    }
  });
}

double cell_term(const Problem& pb, const std::vector<double>& x, std::size_t cid, double eps) {
  const Cell& c = pb.cells[cid];
  double v1[4], v2[4];
  corner_values(c, x, v1, v2);
  const double gx1 = (v1[1] + v1[3] - v1[0] - v1[2]) / (2 * pb.hx);
  const double gy1 = (v1[2] + v1[3] - v1[0] - v1[1]) / (2 * pb.hy);
  const double gx2 = (v2[1] + v2[3] - v2[0] - v2[2]) / (2 * pb.hx);
  const double gy2 = (v2[2] + v2[3] - v2[0] - v2[1]) / (2 * pb.hy);
  const double q = gx1 * gx1 + gy1 * gy1 + gx2 * gx2 + gy2 * gy2;
  return pb.area * std::pow(q + eps * eps, pb.p / 2);
}

double objective(const Problem& pb, const std::vector<double>& x, double eps) {
  std::vector<double> terms(pb.cells.size());
  parallel_for(pb.cells.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t cid = b; cid < e; ++cid) terms[cid] = cell_term(pb, x, cid, eps);
  });
  return pairwise_sum(terms);
}

// E(x) - E(trial) as a sum of per-cell differences: resolves decreases far
// below ulp(E), which the strict-decrease line search needs near the optimum.
double objective_decrease(const Problem& pb, const std::vector<double>& x,
                          const std::vector<double>& trial, double eps) {
  std::vector<double> terms(pb.cells.size());
  parallel_for(pb.cells.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t cid = b; cid < e; ++cid)
      terms[cid] = cell_term(pb, x, cid, eps) - cell_term(pb, trial, cid, eps);
  });
  return pairwise_sum(terms);
}

// dE/dx gathered per node from the cell states (deterministic: fixed gather order).
void gradient_vec(const Problem& pb, const std::vector<CellState>& st, std::vector<double>& grad) {
  grad.assign(pb.n_dofs(), 0.0);
  parallel_for(pb.n_unknown_nodes(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      double g1 = 0, g2 = 0;
      for (int s = 0; s < 4; ++s) {
        const int cid = pb.cells_of_node[n][s];
        if (cid < 0) break;
        const Cell& c = pb.cells[cid];
        int k = 0;
        while (c.dof[k] != static_cast<int>(n)) ++k;
        const double dgx = sign_x()[k] / (2 * pb.hx);
        const double dgy = sign_y()[k] / (2 * pb.hy);
        const CellState& cs = st[cid];
        g1 += 2 * cs.wp * (cs.gx1 * dgx + cs.gy1 * dgy) * pb.area;
        g2 += 2 * cs.wp * (cs.gx2 * dgx + cs.gy2 * dgy) * pb.area;
      }
      grad[2 * n] = g1;
      grad[2 * n + 1] = g2;
    }
  });
}

double grad_density_norm(const Problem& pb, const std::vector<double>& grad) {
  return linf_finite(grad) / pb.area;
}

using SpMat = Eigen::SparseMatrix<double>;

void hessian_triplets(const Problem& pb, const std::vector<CellState>& st,
                      std::vector<Eigen::Triplet<double>>& trip) {
  trip.clear();
  trip.reserve(pb.cells.size() * 64);
  for (std::size_t cid = 0; cid < pb.cells.size(); ++cid) {
    const Cell& c = pb.cells[cid];
    const CellState& cs = st[cid];
    // d q / d u_m(corner k) = 2 (g_m . dg(k));  Hess = area * (2 w' G + w'' dq dq^T)
    double dq[8];  // u1 corners 0..3, u2 corners 4..7
    for (int k = 0; k < 4; ++k) {
      const double dgx = sign_x()[k] / (2 * pb.hx);
      const double dgy = sign_y()[k] / (2 * pb.hy);
      dq[k] = 2 * (cs.gx1 * dgx + cs.gy1 * dgy);
      dq[4 + k] = 2 * (cs.gx2 * dgx + cs.gy2 * dgy);
    }
    for (int a = 0; a < 8; ++a) {
      const int ka = a % 4, ma = a / 4;
      if (c.dof[ka] < 0) continue;
      const int row = 2 * c.dof[ka] + ma;
      for (int b = 0; b < 8; ++b) {
        const int kb = b % 4, mb = b / 4;
        if (c.dof[kb] < 0) continue;
        const int col = 2 * c.dof[kb] + mb;
        double v = cs.wpp * dq[a] * dq[b];
        if (ma == mb) {
          const double ga = sign_x()[ka] / (2 * pb.hx) * sign_x()[kb] / (2 * pb.hx) +
                            sign_y()[ka] / (2 * pb.hy) * sign_y()[kb] / (2 * pb.hy);
          v += 2 * cs.wp * ga;
        }
        // structural zeros stay in: the sparsity pattern must not change
        // between iterations (the factorization pattern is analyzed once)
        trip.emplace_back(row, col, v * pb.area);
      }
    }
  }
}

// Interior initialization: per-node average of the two axis line interpolants
// of boundary values.
std::vector<double> initial_guess(const Problem& pb, const PlanarMap& boundary) {
  const Grid2D& g = *pb.g;
  std::vector<double> x(pb.n_dofs(), 0.0);
  auto ray = [&](int i, int j, int di, int dj) {
    int steps = 0;
    while (true) {
      i += di;
      j += dj;
      ++steps;
      if (g.state(i, j) == NodeState::Boundary) break;
    }
    return std::pair<int, std::size_t>(steps, g.idx(i, j));
  };
  for (std::size_t n = 0; n < pb.n_unknown_nodes(); ++n) {
    const int node = pb.node_of_dof[n];
    const int i = node % g.nx(), j = node / g.nx();
    const auto [dE, nE] = ray(i, j, 1, 0);
    const auto [dW, nW] = ray(i, j, -1, 0);
    const auto [dN, nN] = ray(i, j, 0, 1);
    const auto [dS, nS] = ray(i, j, 0, -1);
    for (int m = 0; m < 2; ++m) {
      const auto& v = m == 0 ? boundary.u1.values() : boundary.u2.values();
      const double vx = (dE * v[nW] + dW * v[nE]) / (dE + dW);
      const double vy = (dN * v[nS] + dS * v[nN]) / (dN + dS);
      x[2 * n + m] = 0.5 * (vx + vy);
    }
  }
  return x;
}

struct StageResult {
  int iterations = 0;
  double grad_norm = 0;
  bool converged = false;
};

StageResult minimize_stage(const Problem& pb, std::vector<double>& x, double eps,
                           const SolveOptions& opts, int stage,
                           std::vector<std::pair<int, double>>& history,
                           std::vector<double>& decreases) {
  StageResult res;
  std::vector<CellState> st;
  std::vector<double> grad, dir, trial;
  const bool newton = opts.method == SolveMethod::DampedNewton;

  Eigen::SimplicialLDLT<SpMat> ldlt;
  SpMat H(static_cast<int>(pb.n_dofs()), static_cast<int>(pb.n_dofs()));
  std::vector<Eigen::Triplet<double>> trip;
  bool pattern_ready = false;

  const double e0 = objective(pb, x, eps);
  double drop = 0.0;  // cumulative decrease since e0, in compensated cell sums
  history.emplace_back(stage, e0);
  double alpha_gd = 1.0;
  int endgame_left = 8;

  for (int it = 0; it < opts.max_iters; ++it) {
    cell_states(pb, x, eps, st, newton);
    gradient_vec(pb, st, grad);
    res.grad_norm = grad_density_norm(pb, grad);
    if (res.grad_norm <= opts.grad_tol) {
      res.converged = true;
      return res;
    }
    ++res.iterations;

    double g_dot_d = 0;
    if (newton) {
      hessian_triplets(pb, st, trip);
      H.setFromTriplets(trip.begin(), trip.end());
      if (!pattern_ready) {
        ldlt.analyzePattern(H);
        pattern_ready = true;
      }
      ldlt.factorize(H);
      dir.assign(pb.n_dofs(), 0.0);
      if (ldlt.info() == Eigen::Success) {
        Eigen::Map<const Eigen::VectorXd> gv(grad.data(), grad.size());
        Eigen::VectorXd d = ldlt.solve(gv);
        for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = d[static_cast<long>(k)];
        for (std::size_t k = 0; k < dir.size(); ++k) g_dot_d += grad[k] * dir[k];
      }
      if (ldlt.info() != Eigen::Success || !(g_dot_d > 0)) {
        dir = grad;  // fall back to steepest descent
        g_dot_d = 0;
        for (double gk : grad) g_dot_d += gk * gk;
      }
    } else {
      dir = grad;
      g_dot_d = 0;
      for (double gk : grad) g_dot_d += gk * gk;
    }

    double alpha = newton ? 1.0 : alpha_gd;
    bool accepted = false;
    double last_de = 0;
    for (int ls = 0; ls < 60; ++ls) {
      trial.resize(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - alpha * dir[k];
      const double de = objective_decrease(pb, x, trial, eps);
      if (ls == 0) last_de = de;
      if (de > 0 && de >= opts.ls_c1 * alpha * g_dot_d) {
        x.swap(trial);
        drop += de;
        history.emplace_back(stage, e0 - drop);
        decreases.push_back(de);
        accepted = true;
        break;
      }
      alpha *= opts.ls_shrink;
    }
    if (!accepted && newton && endgame_left > 0) {
      // energy differences have hit machine resolution; a full Newton step
      // that halves the gradient norm is still trustworthy
      const double noise = 1e-12 * (std::fabs(e0) + 1.0);
      if (last_de > -noise) {
        trial.resize(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - dir[k];
        cell_states(pb, trial, eps, st, false);
        gradient_vec(pb, st, grad);
        const double gn = grad_density_norm(pb, grad);
        if (gn < 0.5 * res.grad_norm) {
          x.swap(trial);
          --endgame_left;
          accepted = true;
        }
      }
    }
    if (!accepted) break;  // stalled: no strictly decreasing step resolves
    if (!newton) alpha_gd = std::min(alpha * 2.0, 1e6);
  }
  cell_states(pb, x, eps, st, false);
  gradient_vec(pb, st, grad);
  res.grad_norm = grad_density_norm(pb, grad);
  res.converged = res.grad_norm <= opts.grad_tol;
  return res;
}

}  // namespace

PlanarMap solve_dirichlet(const PlanarMap& boundary, const SolveOptions& opts,
                          SolveReport& report) {
  if (!(boundary.p > 1)) throw std::invalid_argument("solve_dirichlet: p must exceed 1");
  if (!(opts.grad_tol > 0)) throw std::invalid_argument("solve_dirichlet: grad_tol must be positive");
  if (!(opts.ls_shrink > 0 && opts.ls_shrink < 1))
    throw std::invalid_argument("solve_dirichlet: line-search shrink must lie in (0,1)");
  if (opts.epsilon_reg < 0) throw std::invalid_argument("solve_dirichlet: epsilon_reg must be >= 0");

  const Grid2D& g = boundary.u1.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (g.state(i, j) == NodeState::Boundary &&
          (!std::isfinite(boundary.u1.at(i, j)) || !std::isfinite(boundary.u2.at(i, j))))
        throw std::invalid_argument("solve_dirichlet: non-finite boundary value");

  Problem pb = build_problem(boundary);
  std::vector<double> x = initial_guess(pb, boundary);

  std::vector<double> stages;
  if (opts.continuation && boundary.p != 2.0) {
    for (double e : {1e-2, 1e-4})
      if (e > opts.epsilon_reg) stages.push_back(e);
  }
  stages.push_back(opts.epsilon_reg);

  report = SolveReport{};
  StageResult last;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    last = minimize_stage(pb, x, stages[s], opts, static_cast<int>(s), report.energy_history,
                          report.accepted_decreases);
    report.iterations += last.iterations;
  }
  report.grad_norm = last.grad_norm;
  report.converged = last.converged;

  PlanarMap out(boundary.u1, boundary.u2, boundary.p);
  for (std::size_t n = 0; n < pb.n_unknown_nodes(); ++n) {
    out.u1.values()[pb.node_of_dof[n]] = x[2 * n];
    out.u2.values()[pb.node_of_dof[n]] = x[2 * n + 1];
  }
  report.energy = objective(pb, x, opts.epsilon_reg);

  auto res = residual_divergence(out);
  report.residual_u1 = rms_finite(res.first.values());
  report.residual_u2 = rms_finite(res.second.values());
  return out;
}

namespace {

// grad |Du|^2 and friends from the two jets
struct NodeVec {
  double x, y;
};

}  // namespace

std::pair<ScalarField, ScalarField> residual_divergence(const MapJets& jets, double p,
                                                        double singular_tol) {
  const GridPtr grid = jets.j1.grid;
  ScalarField r1(grid), r2(grid);
  const std::size_t n = grid->size();
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      if (!jets.j1.defined[k] || !jets.j2.defined[k]) continue;
      const ScalarJet &a = jets.j1, &c = jets.j2;
      const double q = grad_mag2(a, k) + grad_mag2(c, k);
      if (q < singular_tol * singular_tol && p < 2) continue;  // flagged singular
      if (q == 0.0) {  // degenerate limit: residual is lap for p=2, 0 for p>2
        const double lap1 = a.uxx[k] + a.uyy[k], lap2 = c.uxx[k] + c.uyy[k];
        r1.values()[k] = p == 2.0 ? lap1 : 0.0;
        r2.values()[k] = p == 2.0 ? lap2 : 0.0;
        continue;
      }
      // grad |Du|^2 = 2 H(u1) grad u1 + 2 H(u2) grad u2
      const NodeVec gq{2 * (a.uxx[k] * a.ux[k] + a.uxy[k] * a.uy[k] + c.uxx[k] * c.ux[k] +
                            c.uxy[k] * c.uy[k]),
                       2 * (a.uxy[k] * a.ux[k] + a.uyy[k] * a.uy[k] + c.uxy[k] * c.ux[k] +
                            c.uyy[k] * c.uy[k])};
      const double lap1 = a.uxx[k] + a.uyy[k], lap2 = c.uxx[k] + c.uyy[k];
      const double qp2 = std::pow(q, 0.5 * p - 1.0);
      const double qp4 = std::pow(q, 0.5 * p - 2.0);
      r1.values()[k] = qp2 * lap1 + 0.5 * (p - 2) * qp4 * (a.ux[k] * gq.x + a.uy[k] * gq.y);
      r2.values()[k] = qp2 * lap2 + 0.5 * (p - 2) * qp4 * (c.ux[k] * gq.x + c.uy[k] * gq.y);
    }
  });
  return {std::move(r1), std::move(r2)};
}

std::pair<ScalarField, ScalarField> residual_divergence(const PlanarMap& u, double singular_tol) {
  return residual_divergence(stencil_jets(u), u.p, singular_tol);
}

std::pair<ScalarField, ScalarField> residual_gradrep(const MapJets& jets, double p,
                                                     double singular_tol) {
  const GridPtr grid = jets.j1.grid;
  ScalarField r1(grid), r2(grid);
  const std::size_t n = grid->size();
  const auto& a = jets.j1;
  const auto& c = jets.j2;
  ScalarField lp1 = scalar_p_laplacian(a, p, PLaplaceForm::Real, singular_tol);
  ScalarField lp2 = scalar_p_laplacian(c, p, PLaplaceForm::Real, singular_tol);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      if (!a.defined[k] || !c.defined[k]) continue;
      const double m1 = grad_mag2(a, k), m2 = grad_mag2(c, k);
      if (m1 < singular_tol * singular_tol || m2 < singular_tol * singular_tol) continue;
      const NodeVec gq2{2 * (c.uxx[k] * c.ux[k] + c.uxy[k] * c.uy[k]),
                        2 * (c.uxy[k] * c.ux[k] + c.uyy[k] * c.uy[k])};
      const NodeVec gq1{2 * (a.uxx[k] * a.ux[k] + a.uxy[k] * a.uy[k]),
                        2 * (a.uxy[k] * a.ux[k] + a.uyy[k] * a.uy[k])};
      const double lap1 = a.uxx[k] + a.uyy[k], lap2 = c.uxx[k] + c.uyy[k];
      r1.values()[k] = std::pow(m1, 2.0 - 0.5 * p) * lp1.values()[k] + m2 * lap1 +
                       0.5 * (p - 2) * (a.ux[k] * gq2.x + a.uy[k] * gq2.y);
      r2.values()[k] = std::pow(m2, 2.0 - 0.5 * p) * lp2.values()[k] + m1 * lap2 +
                       0.5 * (p - 2) * (c.ux[k] * gq1.x + c.uy[k] * gq1.y);
    }
  });
  return {std::move(r1), std::move(r2)};
}

ScalarField scalar_p_laplacian(const ScalarJet& jet, double p, PLaplaceForm form,
                               double singular_tol) {
  const GridPtr grid = jet.grid;
  ScalarField out(grid);
  const std::size_t n = grid->size();
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      if (!jet.defined[k]) continue;
      const double m = grad_mag2(jet, k);
      if (m < singular_tol * singular_tol && (p < 4 || form == PLaplaceForm::Complex)) continue;
      if (form == PLaplaceForm::Real) {
        const double lap = jet.uxx[k] + jet.uyy[k];
        const double quad = jet.ux[k] * jet.ux[k] * jet.uxx[k] +
                            2 * jet.ux[k] * jet.uy[k] * jet.uxy[k] +
                            jet.uy[k] * jet.uy[k] * jet.uyy[k];
        out.values()[k] = std::pow(m, 0.5 * p - 2.0) * (m * lap + (p - 2) * quad);
      } else {
        const cplx f = 0.5 * cplx(jet.ux[k], -jet.uy[k]);
        const cplx fz = 0.25 * cplx(jet.uxx[k] - jet.uyy[k], -2 * jet.uxy[k]);
        const cplx fzb = 0.25 * cplx(jet.uxx[k] + jet.uyy[k], 0);
        const double af = std::abs(f);
        const cplx expr = 2.0 * p * fzb + (p - 2.0) * (f / std::conj(f) * std::conj(fz) +
                                                       std::conj(f) / f * fz);
        out.values()[k] = std::pow(2.0, p - 2.0) * std::pow(af, p - 2.0) * expr.real();
      }
    }
  });
  return out;
}

ScalarField scalar_p_laplacian(const ScalarField& v, double p, PLaplaceForm form,
                               double singular_tol) {
  return scalar_p_laplacian(stencil_jet(v), p, form, singular_tol);
}

}  // namespace pharmap
