#pragma once

#include "nhb/numeric.hpp"

namespace nhb::metric {

/// Metric eta with its spectral factors and the minimal Hermitizing map
/// S = sqrt(D) W^dag, so S^dag S == eta. W columns follow the library-wide
/// phase convention and ascending-eigenvalue order; `degenerate` flags
/// near-coincident metric eigenvalues, where the minimal gauge may jump.
struct MetricData {
  cxmat eta;
  cxmat w;          // unitary eigenvectors (columns)
  rvec d;           // positive eigenvalues, ascending
  cxmat s;          // minimal Hermitizing map
  bool degenerate = false;
};

/// eta = L^dag L from a left-vector matrix (rows). Hermitian positive-definite
/// by construction when L is invertible.
cxmat metric_from_left(const cxmat& l, const Tolerances& tol = {});

MetricData hermitizing_map(const cxmat& eta, const Tolerances& tol = {});

/// Metric-compatible connection components Gamma^mu = S^-1 d_mu S at a point.
struct GammaField {
  std::vector<cxmat> comp;  // one matrix per parameter axis
  Point point;
};

using MatrixField = numeric::MatrixField;

/// Gamma from finite differences of an S-field (one component per axis).
GammaField metric_connection(const MatrixField& s_field, const Point& point,
                             int n_axes, double step);

/// Gamma from a known S and its analytic derivatives.
GammaField metric_connection_analytic(const cxmat& s, const std::vector<cxmat>& ds,
                                      const Point& point);

/// max_mu || d_mu eta - eta Gamma^mu - Gamma^mu^dag eta ||_F.
double compatibility_residual(const MatrixField& eta_field, const GammaField& gamma,
                              const Point& point, double step);

/// || d_mu Gamma^nu - d_nu Gamma^mu + [Gamma^mu, Gamma^nu] ||_F; vanishes for
/// the pure-gauge connection of any smooth S-field.
double flatness_residual(const MatrixField& s_field, const Point& point, int mu,
                         int nu, double step);

/// S H S^-1 + i (dS/dt) S^-1. With a static map and an eta-pseudo-Hermitian H
/// the result is Hermitian.
cxmat hermitize_hamiltonian(const cxmat& h, const cxmat& s, const cxmat& ds_dt,
                            const Tolerances& tol = {});

}  // namespace nhb::metric
