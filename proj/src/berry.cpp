#include "nhb/berry.hpp"

#include <numeric>

namespace nhb::berry {

namespace {

const cxd kI(0.0, 1.0);

cxmat sub_block(const cxmat& m, const std::vector<int>& bands) {
  const int n = static_cast<int>(bands.size());
  cxmat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = m(bands[i], bands[j]);
  return out;
}

std::vector<int> resolve_bands(const std::vector<int>& bands, int dim) {
  if (bands.empty()) return all_bands(dim);
  for (int b : bands)
    require(b >= 0 && b < dim, ErrorKind::ValidationError,
            "band index " + std::to_string(b) + " out of range");
  return bands;
}

struct Stencil {
  biortho::BiorthFrame center;
  std::vector<biortho::BiorthFrame> plus, minus;
  double h;
};

Stencil make_stencil(const FrameField& field, const Point& p, double step) {
  Stencil s;
  s.h = field.fd_step(step);
  s.center = field.frame(p);
  s.plus.reserve(field.axes());
  s.minus.reserve(field.axes());
  for (int mu = 0; mu < field.axes(); ++mu) {
    Point q = p;
    q[mu] = p[mu] + s.h;
    s.plus.push_back(field.frame_aligned(q, s.center));
    q[mu] = p[mu] - s.h;
    s.minus.push_back(field.frame_aligned(q, s.center));
  }
  return s;
}

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::LL: return "ll";
    case Kind::LR: return "lr";
    case Kind::RL: return "rl";
    case Kind::RR: return "rr";
    case Kind::CBC: return "cbc";
    case Kind::HermitianFrame: return "hermitian_frame";
  }
  return "?";
}

std::vector<int> all_bands(int dim) {
  std::vector<int> b(dim);
  std::iota(b.begin(), b.end(), 0);
  return b;
}

double ConnectionField::herm_residual() const {
  double r = 0.0;
  for (const auto& a : comp) r = std::max(r, numeric::hermiticity_residual(a));
  return r;
}

std::map<Kind, ConnectionField> conventional_connections(
    const FrameField& field, const Point& p, const std::vector<int>& bands,
    double step) {
  const auto sel = resolve_bands(bands, field.dim());
  const Stencil st = make_stencil(field, p, step);
  const cxmat& l0 = st.center.l;
  const cxmat r0_dag = st.center.r.adjoint();

  std::map<Kind, ConnectionField> out;
  for (Kind k : {Kind::LL, Kind::LR, Kind::RL, Kind::RR}) {
    out[k].point = p;
    out[k].kind = k;
    out[k].bands = sel;
  }
  for (int mu = 0; mu < field.axes(); ++mu) {
    const cxmat dr = (st.plus[mu].r - st.minus[mu].r) / (2.0 * st.h);
    const cxmat dl_dag =
        (st.plus[mu].l.adjoint() - st.minus[mu].l.adjoint()) / (2.0 * st.h);
    out[Kind::LR].comp.push_back(kI * sub_block(l0 * dr, sel));
    out[Kind::RR].comp.push_back(kI * sub_block(r0_dag * dr, sel));
    out[Kind::LL].comp.push_back(kI * sub_block(l0 * dl_dag, sel));
    out[Kind::RL].comp.push_back(kI * sub_block(r0_dag * dl_dag, sel));
  }
  return out;
}

ConnectionField covariant_connection(const FrameField& field, const Point& p,
                                     const std::vector<int>& bands, double step,
                                     bool crosscheck) {
  const auto& tol = field.tolerances();
  const auto sel = resolve_bands(bands, field.dim());
  const Stencil st = make_stencil(field, p, step);
  const auto gam = field.gamma(p, step);
  const cxmat eta = st.center.l.adjoint() * st.center.l;
  const cxmat r_dag_eta = st.center.r.adjoint() * eta;

  ConnectionField conn;
  conn.point = p;
  conn.kind = Kind::CBC;
  conn.bands = sel;
  double worst = 0.0;
  for (int mu = 0; mu < field.axes(); ++mu) {
    const cxmat dr = (st.plus[mu].r - st.minus[mu].r) / (2.0 * st.h);
    const cxmat cov = dr + gam.comp[mu] * st.center.r;
    const cxmat a_left = kI * sub_block(st.center.l * cov, sel);
    const cxmat a_eta = kI * sub_block(r_dag_eta * cov, sel);
    worst = std::max(worst, (a_left - a_eta).norm());
    conn.comp.push_back(a_left);
  }
  conn.xcheck_residual = worst;
  if (crosscheck)
    require(worst <= tol.xcheck_tol, ErrorKind::CrossCheckFailure,
            "eta-form and left-form covariant connections disagree by " +
                std::to_string(worst) + " (inconsistent eta/Gamma/frame pairing)");
  return conn;
}

ConnectionField hermitian_frame_connection(const FrameField& field, const Point& p,
                                           const std::vector<int>& bands,
                                           double step) {
  const auto& tol = field.tolerances();
  const auto sel = resolve_bands(bands, field.dim());
  const Stencil st = make_stencil(field, p, step);

  const cxmat s0 = field.hermitizing(p);
  const cxmat phi0 = s0 * st.center.r;
  const double unit_res =
      (phi0.adjoint() * phi0 - cxmat::Identity(field.dim(), field.dim())).norm();
  require(unit_res <= tol.tol_unitary, ErrorKind::NotUnitaryFrame,
          "Hermitized frame fails unitarity by " + std::to_string(unit_res));

  ConnectionField conn;
  conn.point = p;
  conn.kind = Kind::HermitianFrame;
  conn.bands = sel;
  for (int mu = 0; mu < field.axes(); ++mu) {
    Point qp = p, qm = p;
    qp[mu] += st.h;
    qm[mu] -= st.h;
    const cxmat phi_p = field.hermitizing(qp) * st.plus[mu].r;
    const cxmat phi_m = field.hermitizing(qm) * st.minus[mu].r;
    const cxmat dphi = (phi_p - phi_m) / (2.0 * st.h);
    conn.comp.push_back(kI * sub_block(phi0.adjoint() * dphi, sel));
  }
  return conn;
}

Distortion distortion_tensor(const biortho::BiorthFrame& frame, const cxmat& eta,
                             const metric::GammaField& gamma,
                             const metric::GammaField& gamma_prime,
                             const std::vector<int>& bands) {
  require(gamma.comp.size() == gamma_prime.comp.size(), ErrorKind::DimensionMismatch,
          "connection component counts differ");
  const auto sel = resolve_bands(bands, frame.dim());
  const cxmat r_dag_eta = frame.r.adjoint() * eta;
  Distortion xi;
  xi.point = gamma.point;
  xi.bands = sel;
  for (size_t mu = 0; mu < gamma.comp.size(); ++mu) {
    const cxmat diff = gamma_prime.comp[mu] - gamma.comp[mu];
    xi.comp.push_back(kI * sub_block(r_dag_eta * diff * frame.r, sel));
  }
  return xi;
}

Distortion distortion_tensor(const FrameField& base, const FrameField& primed,
                             const Point& p, const std::vector<int>& bands,
                             double step) {
  const auto frame = base.frame(p);
  const cxmat eta = frame.l.adjoint() * frame.l;
  return distortion_tensor(frame, eta, base.gamma(p, step), primed.gamma(p, step),
                           resolve_bands(bands, base.dim()));
}

ConnectionField affine_transform(const ConnectionField& conn, const Distortion& xi,
                                 const TransformField& t_field, const Point& p,
                                 double step, const Tolerances& tol) {
  require(conn.comp.size() == xi.comp.size(), ErrorKind::DimensionMismatch,
          "connection/distortion component counts differ");
  const double h = step > 0.0 ? step : tol.step;
  const cxmat t = t_field(p);
  require(t.rows() == conn.comp[0].rows(), ErrorKind::DimensionMismatch,
          "transform dimension does not match band selection");
  const cxmat t_inv = t.partialPivLu().inverse();

  ConnectionField out;
  out.point = p;
  out.kind = conn.kind;
  out.bands = conn.bands;
  for (size_t mu = 0; mu < conn.comp.size(); ++mu) {
    const cxmat dt = numeric::finite_diff(t_field, p, static_cast<int>(mu), h);
    out.comp.push_back(t_inv * (conn.comp[mu] + xi.comp[mu]) * t +
                       kI * t_inv * dt);
  }
  return out;
}

ConnectionField affine_transform_checked(const FrameField& base,
                                         const FrameField& primed,
                                         const TransformField& t_field,
                                         const Point& p,
                                         const std::vector<int>& bands,
                                         double step) {
  const auto& tol = base.tolerances();
  const auto sel = resolve_bands(bands, base.dim());
  const auto conn = covariant_connection(base, p, sel, step);
  const auto xi = distortion_tensor(base, primed, p, sel, step);

  // The law needs the transform restricted to the selected bands.
  auto t_sel = [&t_field, &sel](const Point& q) {
    return sub_block(t_field(q), sel);
  };
  auto law = affine_transform(conn, xi, t_sel, p, base.fd_step(step), tol);

  const auto direct = covariant_connection(primed, p, sel, step);
  double worst = 0.0;
  for (size_t mu = 0; mu < law.comp.size(); ++mu)
    worst = std::max(worst, (law.comp[mu] - direct.comp[mu]).norm());
  law.xcheck_residual = worst;
  require(worst <= tol.xcheck_tol, ErrorKind::CrossCheckFailure,
          "affine law disagrees with direct primed-frame evaluation by " +
              std::to_string(worst));
  return law;
}

cxmat transition_operator(const cxmat& phi_prime, const cxmat& t, const cxmat& phi,
                          const Tolerances& tol) {
  require(std::abs(t.determinant()) > tol.det_floor, ErrorKind::SingularInput,
          "singular transform in transition operator");
  return phi_prime * t.partialPivLu().inverse() * phi.adjoint();
}

TransitionCheck transition_check(const FrameField& base, const FrameField& primed,
                                 const TransformField& t_field, const Point& p,
                                 double step) {
  const auto& tol = base.tolerances();
  const double h = base.fd_step(step);

  auto m_field = [&](const Point& q) {
    return transition_operator(primed.hermitian_frame(q), t_field(q),
                               base.hermitian_frame(q), tol);
  };

  TransitionCheck chk;
  chk.m = m_field(p);
  const cxmat s = base.hermitizing(p);
  chk.s_recon_residual = (primed.hermitizing(p) - chk.m * s).norm();

  const auto gamma = base.gamma(p, step);
  const auto gamma_prime = primed.gamma(p, step);
  const cxmat s_inv = s.partialPivLu().inverse();
  const cxmat m_inv = chk.m.partialPivLu().inverse();
  double worst = 0.0;
  for (int mu = 0; mu < base.axes(); ++mu) {
    const cxmat dm = numeric::finite_diff(m_field, p, mu, h);
    const cxmat rhs = s_inv * (m_inv * dm) * s;
    worst = std::max(worst, (gamma_prime.comp[mu] - gamma.comp[mu] - rhs).norm());
  }
  chk.gamma_residual = worst;
  return chk;
}

}  // namespace nhb::berry
