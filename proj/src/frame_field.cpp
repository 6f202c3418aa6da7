#include "nhb/frame_field.hpp"

namespace nhb {

FrameField FrameField::from_model(const models::HamiltonianField& model,
                                  const Tolerances& tol) {
  FrameField f;
  f.tol_ = tol;
  f.n_axes_ = model.n_axes();
  f.dim_ = model.spec.dim;
  f.preferred_step_ = model.preferred_step;
  f.smooth_ = model.has_analytic_frame();
  if (model.has_analytic_frame()) {
    f.frame_ = model.frame;
  } else {
    f.frame_ = [model, tol](const Point& p) {
      return models::numeric_frame(model, p, tol);
    };
  }
  if (model.has_analytic_s()) {
    f.map_s_ = model.map_s;
    f.map_s_derivs_ = model.map_s_derivs;
  }
  return f;
}

FrameField FrameField::transformed(const TransformFn& t_field) const {
  FrameField out = *this;
  out.map_s_ = nullptr;
  out.map_s_derivs_.clear();
  const auto base = frame_;
  const Tolerances tol = tol_;
  out.frame_ = [base, t_field, tol](const Point& p) {
    return biortho::apply_transform(base(p),
                                    biortho::FrameTransform::from(t_field(p), tol));
  };
  return out;
}

double FrameField::fd_step(double requested) const {
  if (requested > 0.0) return requested;
  if (preferred_step_ > 0.0) return preferred_step_;
  return tol_.step;
}

biortho::BiorthFrame FrameField::frame_aligned(
    const Point& q, const biortho::BiorthFrame& ref) const {
  if (smooth_) return frame_(q);
  return biortho::align_to(ref, frame_(q), tol_);
}

cxmat FrameField::metric_at(const Point& p) const {
  return metric::metric_from_left(frame_(p).l, tol_);
}

metric::MetricData FrameField::metric_data(const Point& p) const {
  return metric::hermitizing_map(metric_at(p), tol_);
}

cxmat FrameField::hermitizing(const Point& p) const {
  if (map_s_) return map_s_(p);
  return metric_data(p).s;
}

metric::GammaField FrameField::gamma(const Point& p, double step) const {
  if (map_s_ && map_s_derivs_.size() == static_cast<size_t>(n_axes_)) {
    std::vector<cxmat> ds;
    ds.reserve(n_axes_);
    for (const auto& d : map_s_derivs_) ds.push_back(d(p));
    return metric::metric_connection_analytic(map_s_(p), ds, p);
  }
  const double h = fd_step(step);
  // The minimal gauge and the degenerate-cluster fallback are each smooth on
  // their own; a stencil straddling the two would differentiate across the
  // convention seam.
  const bool center_degenerate = metric_data(p).degenerate;
  auto s_field = [this, center_degenerate](const Point& q) {
    const auto md = metric_data(q);
    require(md.degenerate == center_degenerate,
            ErrorKind::StencilCrossesDegeneracy,
            "metric degeneracy flag flips inside the derivative stencil");
    return md.s;
  };
  return metric::metric_connection(s_field, p, n_axes_, h);
}

cxmat FrameField::hermitian_frame(const Point& p) const {
  return hermitizing(p) * frame_(p).r;
}

FrameField::TransformFn norm_factor_transform(const FrameField& field) {
  return [field](const Point& p) {
    const auto f = field.frame(p);
    cxmat t = cxmat::Zero(f.dim(), f.dim());
    for (int n = 0; n < f.dim(); ++n) t(n, n) = f.r.col(n).norm();
    return t;
  };
}

}  // namespace nhb
