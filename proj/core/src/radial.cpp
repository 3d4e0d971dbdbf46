#include "pharmap/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pharmap/errors.hpp"

namespace pharmap {

double radial_ode_h2(double r, double H, double Hp, double p) {
  const double denom = (p - 1) * Hp * Hp * r * r * r + 2 * (p - 1) * H * Hp * r * r + p * H * H * r;
  const double numer = (2 * p - 1) * Hp * Hp * Hp * r * r + (5 * p - 4) * H * Hp * Hp * r +
                       3 * p * H * H * Hp;
  if (std::fabs(denom) < 1e-14 * (std::fabs(numer) + 1.0))
    throw NumericalError("radial ODE: vanishing H'' coefficient at r=" + std::to_string(r));
  return -numer / denom;
}

namespace {

struct State {
  double H, Hp;
};

State rk4_step(double r, State s, double dr, double p) {
  auto f = [p](double rr, State q) -> State { return {q.Hp, radial_ode_h2(rr, q.H, q.Hp, p)}; };
  const State k1 = f(r, s);
  const State k2 = f(r + dr / 2, {s.H + dr / 2 * k1.H, s.Hp + dr / 2 * k1.Hp});
  const State k3 = f(r + dr / 2, {s.H + dr / 2 * k2.H, s.Hp + dr / 2 * k2.Hp});
  const State k4 = f(r + dr, {s.H + dr * k3.H, s.Hp + dr * k3.Hp});
  return {s.H + dr / 6 * (k1.H + 2 * k2.H + 2 * k3.H + k4.H),
          s.Hp + dr / 6 * (k1.Hp + 2 * k2.Hp + 2 * k3.Hp + k4.Hp)};
}

}  // namespace

RadialProfile integrate_radial(double p, double r0, double r1, double H0, double Hp0, double step) {
  if (!(p > 1)) throw std::invalid_argument("integrate_radial: p must exceed 1");
  if (!(r0 > 0) || !(r1 > 0)) throw std::invalid_argument("integrate_radial: radii must be positive");
  if (!(step > 0)) throw std::invalid_argument("integrate_radial: step must be positive");

  const double dir = r1 >= r0 ? 1.0 : -1.0;
  const int nsteps = std::max(1, static_cast<int>(std::ceil(std::fabs(r1 - r0) / step)));
  const double dr = dir * std::fabs(r1 - r0) / nsteps;

  RadialProfile prof;
  prof.p = p;
  prof.r.reserve(nsteps + 1);
  prof.H.reserve(nsteps + 1);
  prof.Hp.reserve(nsteps + 1);

  State s{H0, Hp0};
  double r = r0;
  prof.r.push_back(r);
  prof.H.push_back(s.H);
  prof.Hp.push_back(s.Hp);
  for (int k = 0; k < nsteps; ++k) {
    s = rk4_step(r, s, dr, p);
    r = r0 + (k + 1) * dr;
    prof.r.push_back(r);
    prof.H.push_back(s.H);
    prof.Hp.push_back(s.Hp);
  }
  if (dir < 0) {  // keep r strictly increasing
    std::reverse(prof.r.begin(), prof.r.end());
    std::reverse(prof.H.begin(), prof.H.end());
    std::reverse(prof.Hp.begin(), prof.Hp.end());
  }
  prof.Hpp.resize(prof.r.size());
  for (std::size_t k = 0; k < prof.r.size(); ++k)
    prof.Hpp[k] = radial_ode_h2(prof.r[k], prof.H[k], prof.Hp[k], p);
  return prof;
}

RadialProfile integrate_radial_auto(double p, double r0, double r1, double H0, double Hp0,
                                    double tol) {
  double step = std::fabs(r1 - r0) / 64.0;
  RadialProfile coarse = integrate_radial(p, r0, r1, H0, Hp0, step);
  for (int it = 0; it < 12; ++it) {
    RadialProfile fine = integrate_radial(p, r0, r1, H0, Hp0, step / 2);
    double err = 0.0;
    for (std::size_t k = 0; k < coarse.r.size(); ++k) {
      const auto e = eval_profile(fine, coarse.r[k]);
      err = std::max(err, std::fabs(e.H - coarse.H[k]) / 15.0);
    }
    coarse = std::move(fine);
    step /= 2;
    if (err < tol) break;
  }
  return coarse;
}

RadialEval eval_profile(const RadialProfile& prof, double r) {
  if (prof.r.size() < 2) throw std::invalid_argument("profile: too few samples");
  if (r < prof.r_min() - 1e-12 || r > prof.r_max() + 1e-12)
    throw std::invalid_argument("profile: r=" + std::to_string(r) + " outside sampled range");
  const auto it = std::upper_bound(prof.r.begin(), prof.r.end(), r);
  std::size_t k = it == prof.r.begin() ? 0 : static_cast<std::size_t>(it - prof.r.begin() - 1);
  k = std::min(k, prof.r.size() - 2);
  const double h = prof.r[k + 1] - prof.r[k];
  const double t = (r - prof.r[k]) / h;
  auto hermite = [&](double f0, double f1, double d0, double d1) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
           (t3 - t2) * h * d1;
  };
  RadialEval e;
  e.H = hermite(prof.H[k], prof.H[k + 1], prof.Hp[k], prof.Hp[k + 1]);
  e.Hp = hermite(prof.Hp[k], prof.Hp[k + 1], prof.Hpp[k], prof.Hpp[k + 1]);
  e.Hpp = radial_ode_h2(r, e.H, e.Hp, prof.p);
  return e;
}

double RadialScalar::value(double x, double y) const {
  const double r = std::hypot(x, y);
  if (p == 2.0) return c1 * std::log(r) + c2;
  return c1 * std::pow(r, (p - 2) / (p - 1)) + c2;
}

std::array<double, 5> RadialScalar::jet(double x, double y) const {
  const double r2 = x * x + y * y;
  const double r = std::sqrt(r2);
  // u = c1 * rho(r) + c2; ux = rho' x/r etc.
  double rp, rpp;  // rho'(r), rho''(r)
  if (p == 2.0) {
    rp = 1.0 / r;
    rpp = -1.0 / r2;
  } else {
    const double k = (p - 2) / (p - 1);
    rp = k * std::pow(r, k - 1);
    rpp = k * (k - 1) * std::pow(r, k - 2);
  }
  const double ux = c1 * rp * x / r;
  const double uy = c1 * rp * y / r;
  const double a = c1 * (rpp - rp / r) / r2;  // radial minus tangential part
  const double uxx = c1 * rp / r + a * x * x;
  const double uyy = c1 * rp / r + a * y * y;
  const double uxy = a * x * y;
  return {ux, uy, uxx, uxy, uyy};
}

RadialScalar scalar_radial(double p, double c1, double c2) {
  if (!(p > 1)) throw std::invalid_argument("scalar_radial: p must exceed 1");
  return RadialScalar{p, c1, c2};
}

CInterval admissible_c_interval(double p) {
  if (!(p > 1)) throw std::invalid_argument("admissible_c_interval: p must exceed 1");
  CInterval iv;
  const double root = std::fabs(p - 2) * std::sqrt(p);
  iv.c_low = (-p - root) / (2 * (p - 1));
  iv.c_high = (-p + root) / (2 * (p - 1));
  iv.empty = !(iv.c_high > 1.0);
  return iv;
}

double t_quadratic(double p, double c, double t) {
  return (1 + c * (p - 1)) * t * t + (p - 2) * t + 1 + c;
}

double radial_det_h1(const RadialEval& e, double x, double y) {
  const double r2 = x * x + y * y, r = std::sqrt(r2);
  return e.Hp * e.Hpp * x * x / r + e.Hp * e.Hp * (2 * x * x - y * y) / r2;
}

double radial_det_h2(const RadialEval& e, double x, double y) {
  return radial_det_h1(e, y, x);
}

namespace {

std::array<double, 5> radial_jet(const RadialEval& e, double x, double y) {
  const double r2 = x * x + y * y, r = std::sqrt(r2), r3 = r2 * r;
  const double H = e.H, Hp = e.Hp, Hpp = e.Hpp;
  const double ux = Hp * x * x / r + H;
  const double uy = Hp * x * y / r;
  const double uxx = Hpp * x * x * x / r2 + Hp * (2 * x * x * x + 3 * x * y * y) / r3;
  const double uxy = Hpp * x * x * y / r2 + Hp * y * y * y / r3;
  const double uyy = Hpp * x * y * y / r2 + Hp * x * x * x / r3;
  return {ux, uy, uxx, uxy, uyy};
}

}  // namespace

std::array<double, 5> radial_map_jet_u1(const RadialProfile& prof, double x, double y) {
  return radial_jet(eval_profile(prof, std::hypot(x, y)), x, y);
}

std::array<double, 5> radial_map_jet_u2(const RadialProfile& prof, double x, double y) {
  // u2(x, y) = u1(y, x) with the roles of the axes swapped
  auto j = radial_jet(eval_profile(prof, std::hypot(x, y)), y, x);
  return {j[1], j[0], j[4], j[3], j[2]};
}

CounterexampleResult counterexample_map(double p, double c, int nx, int ny) {
  const double p_threshold = 6.0 + 4.0 * std::sqrt(2.0);
  if (!(p > p_threshold))
    throw std::invalid_argument("counterexample_map: requires p > 6+4*sqrt(2) ~ 11.657");
  const CInterval iv = admissible_c_interval(p);
  if (iv.empty || !(c > 1.0) || c > iv.c_high + 1e-12)
    throw std::invalid_argument("counterexample_map: c outside the admissible interval (1, c_high]");

  CounterexampleResult res;
  auto& spec = res.spec;
  spec.p = p;
  spec.c = c;
  // Roots of (1+c(p-1))t^2 + (p-2)t + 1 + c = 0; admissibility makes the
  // discriminant nonnegative and both roots negative.
  const double A = 1 + c * (p - 1), B = p - 2, C = 1 + c;
  const double disc = B * B - 4 * A * C;
  if (disc < 0) throw NumericalError("counterexample_map: negative discriminant");
  spec.t_minus = (-B - std::sqrt(disc)) / (2 * A);
  spec.t_plus = (-B + std::sqrt(disc)) / (2 * A);
  spec.t_star = 0.5 * (spec.t_minus + spec.t_plus);
  spec.r0 = 1.0;
  spec.H0 = 1.0;
  spec.Hp0 = (spec.t_star - 1.0) * spec.H0 / spec.r0;  // t = (H'r + H)/H

  // March outward in both directions while t stays inside [t-, t+],
  // H stays positive and H' nonpositive.
  auto admissible = [&](double r, const State& s) {
    if (!(s.H > 0) || !(s.Hp <= 0)) return false;
    const double t = (s.Hp * r + s.H) / s.H;
    return t >= spec.t_minus && t <= spec.t_plus;
  };
  double dr = 1e-3;
  double r_lo = spec.r0, r_hi = spec.r0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    auto march = [&](double sign) {
      State s{spec.H0, spec.Hp0};
      double r = spec.r0;
      while (true) {
        State nxt;
        try {
          nxt = rk4_step(r, s, sign * dr, p);
        } catch (const NumericalError&) {
          break;
        }
        if (!admissible(r + sign * dr, nxt)) break;
        s = nxt;
        r += sign * dr;
        if (std::fabs(r - spec.r0) > 2.0) break;
      }
      return r;
    };
    r_hi = march(+1.0);
    r_lo = march(-1.0);
    if (r_hi - r_lo >= 1e-3 * spec.r0) break;
    dr /= 4;
  }
  if (r_hi - r_lo < 1e-3 * spec.r0)
    throw NumericalError("counterexample_map: admissible r-range shorter than floor");
  // trim the endpoints so Hermite evaluation never extrapolates
  spec.r_lo = r_lo + dr;
  spec.r_hi = r_hi - dr;

  {
    // assemble the dense profile over the trimmed range, out from r0 both ways
    RadialProfile up = integrate_radial(p, spec.r0, spec.r_hi, spec.H0, spec.Hp0, dr / 2);
    RadialProfile down = integrate_radial(p, spec.r0, spec.r_lo, spec.H0, spec.Hp0, dr / 2);
    RadialProfile joined;
    joined.p = p;
    joined.r = down.r;
    joined.H = down.H;
    joined.Hp = down.Hp;
    joined.Hpp = down.Hpp;
    for (std::size_t k = 1; k < up.r.size(); ++k) {
      joined.r.push_back(up.r[k]);
      joined.H.push_back(up.H[k]);
      joined.Hp.push_back(up.Hp[k]);
      joined.Hpp.push_back(up.Hpp[k]);
    }
    res.profile = std::move(joined);
  }

  SectorSpec sector{c, spec.r_lo, spec.r_hi, std::nullopt};
  res.sector = make_grid(sector, nx, ny);

  ScalarField u1(res.sector), u2(res.sector);
  const Grid2D& g = *res.sector;
  double min1 = std::numeric_limits<double>::infinity();
  double min2 = std::numeric_limits<double>::infinity();
  double cross_err = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.in(i, j)) continue;
      const double x = g.x(i), y = g.y(j);
      const double r = std::hypot(x, y);
      const auto e = eval_profile(res.profile, r);
      u1.at(i, j) = e.H * x;
      u2.at(i, j) = e.H * y;
      if (g.interior(i, j)) {
        const double d1 = radial_det_h1(e, x, y);
        const double d2 = radial_det_h2(e, x, y);
        min1 = std::min(min1, d1);
        min2 = std::min(min2, d2);
        // cross-check the closed form against the jet-built determinant
        const auto j1 = radial_jet(e, x, y);
        cross_err = std::max(cross_err, std::fabs(j1[2] * j1[4] - j1[3] * j1[3] - d1));
      }
    }
  }
  res.map = PlanarMap(std::move(u1), std::move(u2), p);
  res.min_det_h1 = min1;
  res.min_det_h2 = min2;
  res.tol = 10.0 * std::max(cross_err, 1e-12);
  res.both_nonnegative = min1 >= -res.tol && min2 >= -res.tol;
  return res;
}

}  // namespace pharmap
