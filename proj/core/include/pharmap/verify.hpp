#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pharmap/field.hpp"
#include "pharmap/lengthfn.hpp"

namespace pharmap {

enum class Verdict { Holds, Violated, Inconclusive };
std::string to_string(Verdict v);

struct Witness {
  int i = -1, j = -1;
  double x = 0, y = 0;
  double value = 0, margin = 0;
};

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Witness> witness;  // populated whenever verdict == Violated
  double tolerance = 0;
  nlohmann::json details;  // per-check diagnostics (deterministic content)

  nlohmann::json to_json() const;
};

void write_checks_json(const std::string& path, const std::vector<CheckResult>& checks);
void print_checks_table(const std::vector<CheckResult>& checks);

/// Stencil-error scale of det H from a refinement pair (grid vs every other
/// node); the node-wise tolerances below default to 10x this scale.
double det_hessian_error_scale(const ScalarField& u);

/// Hessian sign relation: where det H(u2) >= tol, det H(u1) <= tol must hold
/// (valid for p in [4/3, 2+sqrt(2)]); the quantitative bound
///   det H(u1) <= 4(16Ap^2-1)(|f_z|^2 + (lap u2)^2/16) - 16Ap^2 det H(u2)
/// is evaluated node-wise regardless of p. The verdict reflects the sign
/// relation; details carry the quantitative margin.
CheckResult check_hessian_sign(const PlanarMap& u, const MapJets& jets,
                               std::optional<double> tol_override = std::nullopt);

/// Interior max of each coordinate function must not exceed its boundary max.
CheckResult check_max_principle(const PlanarMap& u, double tol);

struct RegionSpec {
  enum class Kind { LevelBand, Annulus } kind = Kind::LevelBand;
  double a = 0, b = 1;  // band levels of u1, or radii
};

struct IsoOptions {
  std::vector<double> s_samples;
  bool expect_radial_equality = false;  // additionally assert (L')^2/L = (p-1) L''
  double tol_scale = 1.0;
  double grad_lower = 1e-3;  // required lower bound on |grad u1| over the region
};

/// Isoperimetric-type convexity of the level-length function on a region
/// where u1 is constant per boundary component:
///  p  = 2: (ln L)'' >= -tol (equality within tol on radial data);
///  p != 2: (p/(p-1) L^{(p-1)/p})'' >= -L^{-1/p}(alpha/p I1 + beta/p I2)
/// with alpha = 9/4(p-2)^2 + 1 - p, beta = 9/4 (p-2)^2 and the two gradient
/// line integrals I1, I2. The Uhlenbeck-type ratio sup|Du| R^{2/p}/||Du||_p
/// is reported, never asserted.
CheckResult check_isoperimetric(const PlanarMap& u, const MapJets& jets, const RegionSpec& region,
                                const IsoOptions& opts);

/// Integrability estimate for the level-curve curvature:
///   int_B |k_{u1}| <= 2 A(p) (int_B |f_z|^2 + |g_z|^2)^{1/2} (int_B 1/|f|^2)^{1/2},
/// with the |f| > C premise verified numerically.
CheckResult check_kphi_integrability(const PlanarMap& u, const MapJets& jets, double cx, double cy,
                                     double R, double s, double min_f = 1e-3);

}  // namespace pharmap
