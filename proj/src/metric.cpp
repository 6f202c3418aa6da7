#include "nhb/metric.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace nhb::metric {

cxmat metric_from_left(const cxmat& l, const Tolerances& tol) {
  require(l.rows() == l.cols(), ErrorKind::DimensionMismatch, "left matrix not square");
  const double cond = numeric::cond_2norm(l);
  require(cond <= tol.cond_max, ErrorKind::NearDefective,
          "left-frame condition number " + std::to_string(cond) + " exceeds cond_max");
  return l.adjoint() * l;
}

MetricData hermitizing_map(const cxmat& eta, const Tolerances& tol) {
  require(eta.rows() == eta.cols(), ErrorKind::DimensionMismatch, "metric not square");
  require(numeric::is_hermitian(eta, tol.tol_herm), ErrorKind::NotPositiveDefinite,
          "metric is not Hermitian");

  Eigen::SelfAdjointEigenSolver<cxmat> es(eta);
  require(es.info() == Eigen::Success, ErrorKind::NonConvergence,
          "metric eigensolve failed");

  MetricData md;
  md.eta = eta;
  md.d = es.eigenvalues();  // ascending
  require(md.d.minCoeff() > tol.posdef_floor, ErrorKind::NotPositiveDefinite,
          "metric eigenvalue " + std::to_string(md.d.minCoeff()) +
              " at or below posdef_floor");

  md.w = es.eigenvectors();
  numeric::fix_column_phases(md.w);

  for (int i = 0; i + 1 < md.d.size(); ++i) {
    const double rel = (md.d(i + 1) - md.d(i)) / std::max(md.d(i + 1), 1e-300);
    if (rel < tol.deg_floor) md.degenerate = true;
  }

  // Within a degenerate eigenvalue cluster the eigenbasis (and with it the
  // minimal gauge sqrt(D) W^dag) is arbitrary per evaluation. The principal
  // root W sqrt(D) W^dag depends on eta alone, so it is the gauge-stable
  // choice there; eta = I then maps to S = I.
  if (md.degenerate)
    md.s = md.w * md.d.cwiseSqrt().asDiagonal() * md.w.adjoint();
  else
    md.s = md.d.cwiseSqrt().asDiagonal() * md.w.adjoint();
  return md;
}

GammaField metric_connection(const MatrixField& s_field, const Point& point,
                             int n_axes, double step) {
  const cxmat s0 = s_field(point);
  const cxmat s0_inv = s0.partialPivLu().inverse();
  GammaField g;
  g.point = point;
  g.comp.reserve(n_axes);
  for (int mu = 0; mu < n_axes; ++mu)
    g.comp.push_back(s0_inv * numeric::finite_diff(s_field, point, mu, step));
  return g;
}

GammaField metric_connection_analytic(const cxmat& s, const std::vector<cxmat>& ds,
                                      const Point& point) {
  const cxmat s_inv = s.partialPivLu().inverse();
  GammaField g;
  g.point = point;
  g.comp.reserve(ds.size());
  for (const auto& d : ds) g.comp.push_back(s_inv * d);
  return g;
}

double compatibility_residual(const MatrixField& eta_field, const GammaField& gamma,
                              const Point& point, double step) {
  const cxmat eta = eta_field(point);
  double worst = 0.0;
  for (size_t mu = 0; mu < gamma.comp.size(); ++mu) {
    const cxmat deta =
        numeric::finite_diff(eta_field, point, static_cast<int>(mu), step);
    const cxmat& g = gamma.comp[mu];
    worst = std::max(worst, (deta - eta * g - g.adjoint() * eta).norm());
  }
  return worst;
}

double flatness_residual(const MatrixField& s_field, const Point& point, int mu,
                         int nu, double step) {
  const int n_axes = static_cast<int>(point.size());
  auto gamma_comp = [&](const Point& p, int axis) {
    return metric_connection(s_field, p, n_axes, step).comp[axis];
  };
  auto gamma_nu_field = [&](const Point& p) { return gamma_comp(p, nu); };
  auto gamma_mu_field = [&](const Point& p) { return gamma_comp(p, mu); };

  const cxmat d_mu_gnu = numeric::finite_diff(gamma_nu_field, point, mu, step);
  const cxmat d_nu_gmu = numeric::finite_diff(gamma_mu_field, point, nu, step);
  const cxmat gm = gamma_comp(point, mu);
  const cxmat gn = gamma_comp(point, nu);
  return (d_mu_gnu - d_nu_gmu + gm * gn - gn * gm).norm();
}

cxmat hermitize_hamiltonian(const cxmat& h, const cxmat& s, const cxmat& ds_dt,
                            const Tolerances& tol) {
  require(std::abs(s.determinant()) > tol.det_floor, ErrorKind::SingularInput,
          "Hermitizing map is singular");
  const cxmat s_inv = s.partialPivLu().inverse();
  const cxd i_unit(0.0, 1.0);
  return s * h * s_inv + i_unit * ds_dt * s_inv;
}

}  // namespace nhb::metric
