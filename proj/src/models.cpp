#include "nhb/models.hpp"

#include <cmath>

namespace nhb::models {

namespace {
const cxd kI(0.0, 1.0);
}

int ModelSpec::axis_index(const std::string& axis) const {
  for (size_t i = 0; i < param_names.size(); ++i)
    if (param_names[i] == axis) return static_cast<int>(i);
  throw Error(ErrorKind::ValidationError,
              "model '" + name + "' has no axis '" + axis + "'");
}

cxmat build_pseudo_hermitian(double t, double x, double y, double a0) {
  cxmat h(2, 2);
  h(0, 0) = cxd(a0 + t, 0.0);
  h(0, 1) = cxd(x, -y);
  h(1, 0) = cxd(-x, -y);
  h(1, 1) = cxd(a0 - t, 0.0);
  return h;
}

Cartesian3 hyperbolic_point(double l, double xi, double lambda) {
  require(l > 0.0, ErrorKind::InvalidRadius, "hyperbolic radius l must be > 0");
  return {l * std::cosh(xi), l * std::sinh(xi) * std::cos(lambda),
          l * std::sinh(xi) * std::sin(lambda)};
}

SpectralPhase classify_phase(double t, double x, double y) {
  return (t * t - x * x - y * y > 0.0) ? SpectralPhase::Exact : SpectralPhase::Broken;
}

biortho::BiorthFrame analytic_eigenframe(double xi, double lambda, double l,
                                         double a0) {
  const double sh = std::sinh(0.5 * xi);
  const double ch = std::cosh(0.5 * xi);
  const cxd em = std::exp(-kI * lambda);  // e^{-i lambda}
  const cxd ep = std::exp(kI * lambda);

  biortho::BiorthFrame f;
  f.r.resize(2, 2);
  f.l.resize(2, 2);
  f.energies.resize(2);

  f.r(0, 0) = -em * sh;
  f.r(1, 0) = ch;
  f.r(0, 1) = em * ch;
  f.r(1, 1) = -sh;

  // Left rows are the conjugate transposes of the left kets.
  f.l(0, 0) = ep * sh;
  f.l(0, 1) = ch;
  f.l(1, 0) = ep * ch;
  f.l(1, 1) = sh;

  f.energies(0) = a0 - l;
  f.energies(1) = a0 + l;
  return f;
}

cxmat analytic_hermitizing_map(double xi, double lambda) {
  const double rt = 1.0 / std::sqrt(2.0);
  const cxd eil = std::exp(kI * lambda);
  const double em = std::exp(-0.5 * xi);
  const double ep = std::exp(0.5 * xi);
  cxmat s(2, 2);
  s(0, 0) = -rt * em * eil;
  s(0, 1) = rt * em;
  s(1, 0) = rt * ep * eil;
  s(1, 1) = rt * ep;
  return s;
}

cxmat analytic_hermitizing_map_dxi(double xi, double lambda) {
  const double rt = 1.0 / std::sqrt(2.0);
  const cxd eil = std::exp(kI * lambda);
  const double em = std::exp(-0.5 * xi);
  const double ep = std::exp(0.5 * xi);
  cxmat d(2, 2);
  d(0, 0) = 0.5 * rt * em * eil;
  d(0, 1) = -0.5 * rt * em;
  d(1, 0) = 0.5 * rt * ep * eil;
  d(1, 1) = 0.5 * rt * ep;
  return d;
}

cxmat analytic_hermitizing_map_dlambda(double xi, double lambda) {
  const double rt = 1.0 / std::sqrt(2.0);
  const cxd eil = std::exp(kI * lambda);
  const double em = std::exp(-0.5 * xi);
  const double ep = std::exp(0.5 * xi);
  cxmat d(2, 2);
  d(0, 0) = -kI * rt * em * eil;
  d(0, 1) = 0.0;
  d(1, 0) = kI * rt * ep * eil;
  d(1, 1) = 0.0;
  return d;
}

cxmat build_hermitian_qwz(double m, double kx, double ky) {
  const double dz = m - std::cos(kx) - std::cos(ky);
  cxmat h(2, 2);
  h(0, 0) = cxd(dz, 0.0);
  h(0, 1) = cxd(std::sin(kx), -std::sin(ky));
  h(1, 0) = cxd(std::sin(kx), std::sin(ky));
  h(1, 1) = cxd(-dz, 0.0);
  return h;
}

HamiltonianField make_pseudo_hermitian_hyperbolic(double l, double a0) {
  require(l > 0.0, ErrorKind::InvalidRadius, "hyperbolic model needs l > 0");
  HamiltonianField f;
  f.spec.name = "pseudo_hermitian_hyperbolic";
  f.spec.fixed = {{"l", l}, {"a0", a0}};
  f.spec.param_names = {"lambda", "xi"};
  f.spec.dim = 2;
  f.h = [l, a0](const Point& p) {
    const auto c = hyperbolic_point(l, p[1], p[0]);
    return build_pseudo_hermitian(c.t, c.x, c.y, a0);
  };
  f.frame = [l, a0](const Point& p) {
    return analytic_eigenframe(p[1], p[0], l, a0);
  };
  f.map_s = [](const Point& p) { return analytic_hermitizing_map(p[1], p[0]); };
  f.map_s_derivs = {
      [](const Point& p) { return analytic_hermitizing_map_dlambda(p[1], p[0]); },
      [](const Point& p) { return analytic_hermitizing_map_dxi(p[1], p[0]); }};
  return f;
}

HamiltonianField make_pseudo_hermitian_cartesian(double a0) {
  HamiltonianField f;
  f.spec.name = "pseudo_hermitian_cartesian";
  f.spec.fixed = {{"a0", a0}};
  f.spec.param_names = {"t", "x", "y"};
  f.spec.dim = 2;
  f.h = [a0](const Point& p) {
    return build_pseudo_hermitian(p[0], p[1], p[2], a0);
  };
  return f;
}

HamiltonianField make_qwz(double m) {
  HamiltonianField f;
  f.spec.name = "qwz";
  f.spec.fixed = {{"m", m}};
  f.spec.param_names = {"kx", "ky"};
  f.spec.dim = 2;
  f.h = [m](const Point& p) { return build_hermitian_qwz(m, p[0], p[1]); };
  return f;
}

HamiltonianField make_builtin(const std::string& name,
                              const std::map<std::string, double>& params) {
  auto get = [&params](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "pseudo_hermitian_hyperbolic")
    return make_pseudo_hermitian_hyperbolic(get("l", 1.0), get("a0", 0.0));
  if (name == "pseudo_hermitian_cartesian")
    return make_pseudo_hermitian_cartesian(get("a0", 0.0));
  if (name == "qwz") return make_qwz(get("m", 1.0));
  throw Error(ErrorKind::ValidationError, "unknown model '" + name + "'");
}

biortho::BiorthFrame numeric_frame(const HamiltonianField& field, const Point& p,
                                   const Tolerances& tol) {
  const auto sys = numeric::eig_general(field.h(p), tol);
  biortho::BiorthFrame f;
  f.r = sys.right;
  f.l = sys.left;
  f.energies = sys.eigenvalues;
  return f;
}

}  // namespace nhb::models
