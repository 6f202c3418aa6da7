#pragma once

#include <map>
#include <optional>

#include "nhb/biortho.hpp"

namespace nhb::models {

struct ModelSpec {
  std::string name;
  std::map<std::string, double> fixed;      // held parameters (l, a0, m, ...)
  std::vector<std::string> param_names;     // free axes, in order
  int dim = 0;

  int axis_index(const std::string& name) const;
};

/// A parametrized Hamiltonian family. Closed-form pieces (eigenframe,
/// Hermitizing map and its derivatives) are optional and used in place of
/// finite differences when registered. The registered map and derivatives
/// must follow the same minimal-gauge convention the numeric route uses.
struct HamiltonianField {
  ModelSpec spec;
  std::function<cxmat(const Point&)> h;
  std::function<biortho::BiorthFrame(const Point&)> frame;       // canonical gauge
  std::function<cxmat(const Point&)> map_s;                      // minimal S
  std::vector<std::function<cxmat(const Point&)>> map_s_derivs;  // per axis
  double preferred_step = 0.0;  // 0 => tolerance default; grid-backed models set this

  int n_axes() const { return static_cast<int>(spec.param_names.size()); }
  bool has_analytic_frame() const { return static_cast<bool>(frame); }
  bool has_analytic_s() const {
    return map_s && map_s_derivs.size() == spec.param_names.size();
  }
};

/// t*sigma_z + i*x*sigma_y - i*y*sigma_x + a0*I, assembled exactly:
/// [[a0 + t, x - i y], [-x - i y, a0 - t]].
cxmat build_pseudo_hermitian(double t, double x, double y, double a0);

struct Cartesian3 {
  double t, x, y;
};

/// t = l cosh(xi), x = l sinh(xi) cos(lambda), y = l sinh(xi) sin(lambda);
/// satisfies t^2 - x^2 - y^2 = l^2 identically. Requires l > 0.
Cartesian3 hyperbolic_point(double l, double xi, double lambda);

enum class SpectralPhase { Exact, Broken };

/// Exact phase (real spectrum) iff t^2 - x^2 - y^2 > 0.
SpectralPhase classify_phase(double t, double x, double y);

/// Closed-form eigenframe of the two-level model on the reduced (lambda, xi)
/// manifold; biorthonormal exactly. Band 0 carries energy a0 - l, band 1
/// carries a0 + l. This frame is the gauge in which the model's closed-form
/// connection values hold; it is deliberately not unit-normalized.
biortho::BiorthFrame analytic_eigenframe(double xi, double lambda, double l,
                                         double a0);

/// Closed-form minimal Hermitizing map of the two-level model (metric
/// eigenvectors phase-fixed so the second component is real positive,
/// eigenvalues ascending for xi > 0).
cxmat analytic_hermitizing_map(double xi, double lambda);
cxmat analytic_hermitizing_map_dxi(double xi, double lambda);
cxmat analytic_hermitizing_map_dlambda(double xi, double lambda);

/// sin(kx) sigma_x + sin(ky) sigma_y + (m - cos kx - cos ky) sigma_z.
/// Hermitian two-band model with a nonzero lower-band Chern number for
/// 0 < |m| < 2; serves as the topology oracle.
cxmat build_hermitian_qwz(double m, double kx, double ky);

/// Built-in families, selectable by name in run configs.
HamiltonianField make_pseudo_hermitian_hyperbolic(double l, double a0);
HamiltonianField make_pseudo_hermitian_cartesian(double a0);
HamiltonianField make_qwz(double m);

/// Dispatch on "pseudo_hermitian_hyperbolic" | "pseudo_hermitian_cartesian" |
/// "qwz" with per-model fixed parameters.
HamiltonianField make_builtin(const std::string& name,
                              const std::map<std::string, double>& params);

/// Numeric frame of h(p) in the deterministic eigensolver gauge.
biortho::BiorthFrame numeric_frame(const HamiltonianField& field, const Point& p,
                                   const Tolerances& tol = {});

}  // namespace nhb::models
