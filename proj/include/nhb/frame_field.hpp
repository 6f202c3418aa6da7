#pragma once

#include "nhb/metric.hpp"
#include "nhb/models.hpp"

namespace nhb {

/// Smooth-gauge view of a Hamiltonian family's eigenframes together with the
/// induced metric machinery. Fields built from a closed-form frame are
/// globally smooth; numeric fields are smooth only after stencil-local
/// alignment, which frame_aligned() provides.
class FrameField {
 public:
  using TransformFn = std::function<cxmat(const Point&)>;

  static FrameField from_model(const models::HamiltonianField& model,
                               const Tolerances& tol = {});

  /// Frame change r' = r T(p), l' = T(p)^-1 l at every point. Drops any
  /// registered closed-form Hermitizing map (the metric changes with the
  /// frame). T must be smooth wherever derivatives are taken.
  FrameField transformed(const TransformFn& t_field) const;

  const Tolerances& tolerances() const { return tol_; }
  int axes() const { return n_axes_; }
  int dim() const { return dim_; }
  bool smooth_gauge() const { return smooth_; }
  bool has_analytic_s() const { return static_cast<bool>(map_s_); }

  /// Finite-difference step: explicit argument wins, then the model's
  /// preferred step (grid-backed models), then the tolerance default.
  double fd_step(double requested = 0.0) const;

  biortho::BiorthFrame frame(const Point& p) const { return frame_(p); }

  /// Frame at q in the gauge of `ref` (identity for smooth fields).
  biortho::BiorthFrame frame_aligned(const Point& q,
                                     const biortho::BiorthFrame& ref) const;

  /// eta = L^dag L of the frame at p. Invariant under per-band phase
  /// alignment, so no gauge smoothing is needed for metric quantities.
  cxmat metric_at(const Point& p) const;

  metric::MetricData metric_data(const Point& p) const;

  /// Minimal Hermitizing map (registered closed form when available).
  cxmat hermitizing(const Point& p) const;

  /// Metric-compatible connection at p (analytic derivatives when
  /// registered, else finite differences of the minimal-map field; throws
  /// StencilCrossesDegeneracy if the stencil hits a degenerate metric).
  metric::GammaField gamma(const Point& p, double step = 0.0) const;

  /// Phi = S R, the unitary eigenframe of the Hermitized Hamiltonian.
  cxmat hermitian_frame(const Point& p) const;

 private:
  std::function<biortho::BiorthFrame(const Point&)> frame_;
  std::function<cxmat(const Point&)> map_s_;
  std::vector<std::function<cxmat(const Point&)>> map_s_derivs_;
  Tolerances tol_;
  int n_axes_ = 0;
  int dim_ = 0;
  double preferred_step_ = 0.0;
  bool smooth_ = false;
};

/// T(p) = diag(||r_n(p)||): scales every right vector by its own 2-norm
/// (the inverse transform normalizes the frame). Smooth whenever the field's
/// gauge is smooth.
FrameField::TransformFn norm_factor_transform(const FrameField& field);

}  // namespace nhb
