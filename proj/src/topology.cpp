#include "nhb/topology.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace nhb::topology {

namespace {

const cxd kI(0.0, 1.0);

cxmat sub_block(const cxmat& m, const std::vector<int>& bands) {
  const int n = static_cast<int>(bands.size());
  cxmat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = m(bands[i], bands[j]);
  return out;
}

/// 3x3 stencil of frames spanning two axes, chained into one local gauge:
/// side nodes align to the center, corners align to their row node.
class FramePatch {
 public:
  FramePatch(const FrameField& field, const Point& p, int axis_a, int axis_b,
             double h)
      : field_(field), axis_a_(axis_a), axis_b_(axis_b) {
    auto node = [&](int a, int b) {
      Point q = p;
      q[axis_a] += a * h;
      if (axis_b != axis_a) q[axis_b] += b * h;
      return q;
    };
    at(0, 0) = field.frame(p);
    for (int a : {-1, 1}) at(a, 0) = field.frame_aligned(node(a, 0), at(0, 0));
    for (int a : {-1, 0, 1})
      for (int b : {-1, 1}) at(a, b) = field.frame_aligned(node(a, b), at(a, 0));
    points_.resize(9);
    for (int a : {-1, 0, 1})
      for (int b : {-1, 0, 1}) point(a, b) = node(a, b);
  }

  const biortho::BiorthFrame& get(int a, int b) const {
    return frames_[(a + 1) * 3 + (b + 1)];
  }
  const Point& pt(int a, int b) const { return points_[(a + 1) * 3 + (b + 1)]; }

  int offset_axis(int global_axis) const {
    if (global_axis == axis_a_) return 0;
    if (global_axis == axis_b_) return 1;
    throw Error(ErrorKind::ValidationError, "axis outside curvature patch");
  }

  const FrameField& field() const { return field_; }

 private:
  biortho::BiorthFrame& at(int a, int b) { return frames_[(a + 1) * 3 + (b + 1)]; }
  Point& point(int a, int b) { return points_[(a + 1) * 3 + (b + 1)]; }

  const FrameField& field_;
  int axis_a_, axis_b_;
  biortho::BiorthFrame frames_[9];
  std::vector<Point> points_;
};

/// Connection component for `axis` at patch node (a, b), differentiated
/// within the patch gauge.
cxmat patch_connection(const FramePatch& patch, berry::Kind kind,
                       const std::vector<int>& bands, int a, int b, int axis,
                       double h, double step_for_gamma) {
  const int da = patch.offset_axis(axis) == 0 ? 1 : 0;
  const int db = 1 - da;
  const auto& fp = patch.get(a + da, b + db);
  const auto& fm = patch.get(a - da, b - db);
  const auto& f0 = patch.get(a, b);
  const cxmat dr = (fp.r - fm.r) / (2.0 * h);

  switch (kind) {
    case berry::Kind::LR:
      return kI * sub_block(f0.l * dr, bands);
    case berry::Kind::RR:
      return kI * sub_block(f0.r.adjoint() * dr, bands);
    case berry::Kind::LL: {
      const cxmat dl_dag = (fp.l.adjoint() - fm.l.adjoint()) / (2.0 * h);
      return kI * sub_block(f0.l * dl_dag, bands);
    }
    case berry::Kind::RL: {
      const cxmat dl_dag = (fp.l.adjoint() - fm.l.adjoint()) / (2.0 * h);
      return kI * sub_block(f0.r.adjoint() * dl_dag, bands);
    }
    case berry::Kind::CBC: {
      const auto gam = patch.field().gamma(patch.pt(a, b), step_for_gamma);
      return kI * sub_block(f0.l * (dr + gam.comp[axis] * f0.r), bands);
    }
    case berry::Kind::HermitianFrame: {
      const cxmat phi0 = patch.field().hermitizing(patch.pt(a, b)) * f0.r;
      const cxmat phi_p = patch.field().hermitizing(patch.pt(a + da, b + db)) * fp.r;
      const cxmat phi_m = patch.field().hermitizing(patch.pt(a - da, b - db)) * fm.r;
      return kI * sub_block(phi0.adjoint() * (phi_p - phi_m) / (2.0 * h), bands);
    }
  }
  throw Error(ErrorKind::ValidationError, "unsupported connection kind");
}

std::vector<int> resolve_bands(const std::vector<int>& bands, int dim) {
  return bands.empty() ? berry::all_bands(dim) : bands;
}

}  // namespace

ConnProvider connection_provider(const FrameField& field, berry::Kind kind,
                                 const std::vector<int>& bands, double step) {
  const auto sel = resolve_bands(bands, field.dim());
  return [&field, kind, sel, step](const Point& p) {
    if (kind == berry::Kind::CBC)
      return berry::covariant_connection(field, p, sel, step).comp;
    if (kind == berry::Kind::HermitianFrame)
      return berry::hermitian_frame_connection(field, p, sel, step).comp;
    return berry::conventional_connections(field, p, sel, step).at(kind).comp;
  };
}

cxmat curvature_at(const FrameField& field, berry::Kind kind,
                   const std::vector<int>& bands, const Point& p, int mu, int nu,
                   double h) {
  const auto sel = resolve_bands(bands, field.dim());
  const int n = static_cast<int>(sel.size());
  if (mu == nu) return cxmat::Zero(n, n);
  // Canonical axis order keeps the antisymmetry exact.
  if (mu > nu) return cxmat(-curvature_at(field, kind, bands, p, nu, mu, h));

  // Patch axes: axis_a = mu, axis_b = nu.
  FramePatch patch(field, p, mu, nu, h);
  auto a_comp = [&](int oa, int ob, int axis) {
    return patch_connection(patch, kind, sel, oa, ob, axis, h, h);
  };

  const cxmat dnu_amu = (a_comp(0, 1, mu) - a_comp(0, -1, mu)) / (2.0 * h);
  const cxmat dmu_anu = (a_comp(1, 0, nu) - a_comp(-1, 0, nu)) / (2.0 * h);
  const cxmat a_mu = a_comp(0, 0, mu);
  const cxmat a_nu = a_comp(0, 0, nu);
  return dnu_amu - dmu_anu - kI * (a_nu * a_mu - a_mu * a_nu);
}

cxmat transformed_curvature_at(const FrameField& base, const FrameField& primed,
                               const berry::TransformField& t_field,
                               const std::vector<int>& bands, const Point& p,
                               int mu, int nu, double h, bool crosscheck) {
  const auto& tol = base.tolerances();
  const auto sel = resolve_bands(bands, base.dim());
  const int n = static_cast<int>(sel.size());
  if (mu == nu) return cxmat::Zero(n, n);

  auto a_tilde = [&](const Point& q, int axis) {
    const auto conn = berry::covariant_connection(base, q, sel);
    const auto xi = berry::distortion_tensor(base, primed, q, sel);
    return cxmat(conn.comp[axis] + xi.comp[axis]);
  };

  auto shifted = [&](int axis, double d) {
    Point q = p;
    q[axis] += d;
    return q;
  };
  const cxmat dnu = (a_tilde(shifted(nu, h), mu) - a_tilde(shifted(nu, -h), mu)) /
                    (2.0 * h);
  const cxmat dmu = (a_tilde(shifted(mu, h), nu) - a_tilde(shifted(mu, -h), nu)) /
                    (2.0 * h);
  const cxmat am = a_tilde(p, mu);
  const cxmat an = a_tilde(p, nu);
  const cxmat f_tilde = dnu - dmu - kI * (an * am - am * an);

  cxmat t = t_field(p);
  if (t.rows() != n) t = sub_block(t, sel);
  const cxmat f_primed = t.partialPivLu().inverse() * f_tilde * t;

  if (crosscheck) {
    const cxmat direct = curvature_at(primed, berry::Kind::CBC, sel, p, mu, nu, h);
    const double res = (f_primed - direct).norm();
    require(res <= tol.xcheck_tol, ErrorKind::CrossCheckFailure,
            "transformed curvature disagrees with direct evaluation by " +
                std::to_string(res));
  }
  return f_primed;
}

cxd berry_phase_abelian(const ConnProvider& conn, const ParamPath& path) {
  path.validate();
  cxd gamma(0.0, 0.0);
  std::vector<cxmat> prev = conn(path.pts.front());
  require(prev[0].rows() == 1, ErrorKind::ValidationError,
          "abelian phase needs a single-band selection");
  for (size_t k = 1; k < path.pts.size(); ++k) {
    const std::vector<cxmat> cur = conn(path.pts[k]);
    for (size_t mu = 0; mu < cur.size(); ++mu) {
      const double dl = path.pts[k][mu] - path.pts[k - 1][mu];
      gamma += 0.5 * (prev[mu](0, 0) + cur[mu](0, 0)) * dl;
    }
    prev = cur;
  }
  return gamma;
}

double discrete_loop_phase(const FrameField& field, berry::Kind kind, int band,
                           const ParamPath& path) {
  path.validate();
  require(path.closed, ErrorKind::ValidationError,
          "discrete loop phase needs a closed path");
  const bool use_phi = (kind != berry::Kind::LR);
  double total = 0.0;
  auto bra_of = [&](const Point& p) -> Eigen::RowVectorXcd {
    if (use_phi) return field.hermitian_frame(p).adjoint().row(band);
    return field.frame(p).l.row(band);
  };
  auto ket_of = [&](const Point& p) -> cxvec {
    if (use_phi) return field.hermitian_frame(p).col(band);
    return field.frame(p).r.col(band);
  };
  for (size_t k = 0; k + 1 < path.pts.size(); ++k) {
    const cxd o = bra_of(path.pts[k]) * ket_of(path.pts[k + 1]);
    require(std::abs(o) > 1e-12, ErrorKind::LostContinuity,
            "vanishing loop-link overlap; refine the path");
    total -= std::arg(o);
  }
  return std::remainder(total, kTwoPi);
}

namespace {

cxmat wilson_product(const ConnProvider& conn, const std::vector<Point>& nodes) {
  cxmat w;
  for (size_t k = 0; k + 1 < nodes.size(); ++k) {
    Point mid(nodes[k].size());
    for (size_t i = 0; i < mid.size(); ++i)
      mid[i] = 0.5 * (nodes[k][i] + nodes[k + 1][i]);
    const std::vector<cxmat> a = conn(mid);
    cxmat expo = cxmat::Zero(a[0].rows(), a[0].cols());
    for (size_t mu = 0; mu < a.size(); ++mu)
      expo += a[mu] * (nodes[k + 1][mu] - nodes[k][mu]);
    const cxmat seg = (kI * expo).exp();
    w = (k == 0) ? seg : cxmat(seg * w);  // later segments act on the left
  }
  return w;
}

std::vector<Point> subdivide(const std::vector<Point>& nodes) {
  std::vector<Point> out;
  out.reserve(nodes.size() * 2 - 1);
  for (size_t k = 0; k + 1 < nodes.size(); ++k) {
    out.push_back(nodes[k]);
    Point mid(nodes[k].size());
    for (size_t i = 0; i < mid.size(); ++i)
      mid[i] = 0.5 * (nodes[k][i] + nodes[k + 1][i]);
    out.push_back(mid);
  }
  out.push_back(nodes.back());
  return out;
}

}  // namespace

cxmat wilson_loop(const ConnProvider& conn, const ParamPath& path,
                  double refine_tol, int max_refine) {
  path.validate();
  std::vector<Point> nodes = path.pts;
  cxmat w = wilson_product(conn, nodes);
  for (int r = 0; r < max_refine; ++r) {
    nodes = subdivide(nodes);
    const cxmat w2 = wilson_product(conn, nodes);
    const double change = (w2 - w).norm();
    w = w2;
    if (change < refine_tol) break;
  }
  return w;
}

void validate_closed_2d(const ParamGrid& grid) {
  grid.validate();
  require(grid.rank() == 2, ErrorKind::ValidationError, "Chern grids must be 2D");
  require(grid.axes[0].periodic && grid.axes[1].periodic, ErrorKind::ValidationError,
          "Chern grids must be periodic in both axes");
}

std::vector<double> plaquette_fluxes(const FrameField& field, berry::Kind kind,
                                     const std::vector<int>& bands,
                                     const ParamGrid& grid) {
  validate_closed_2d(grid);
  require(kind == berry::Kind::LR || kind == berry::Kind::CBC ||
              kind == berry::Kind::HermitianFrame,
          ErrorKind::ValidationError,
          "link-plaquette invariant defined for lr / cbc / hermitian_frame kinds");
  const auto sel = resolve_bands(bands, field.dim());
  const auto& tol = field.tolerances();
  const int n0 = grid.axes[0].size;
  const int n1 = grid.axes[1].size;

  const bool use_phi = (kind != berry::Kind::LR);
  std::vector<cxmat> bra(static_cast<size_t>(n0) * n1);
  std::vector<cxmat> ket(static_cast<size_t>(n0) * n1);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const auto f = field.frame(grid.point({i, j}));
      require(biortho::min_eigenvalue_gap(f.energies) > tol.gap_floor,
              ErrorKind::GapClosure, "band gap closes on the Chern grid");
      const size_t idx = static_cast<size_t>(i) * n1 + j;
      if (use_phi) {
        const cxmat phi = field.hermitizing(grid.point({i, j})) * f.r;
        bra[idx] = phi.adjoint();
        ket[idx] = phi;
      } else {
        bra[idx] = f.l;
        ket[idx] = f.r;
      }
    }
  }

  auto link = [&](int i, int j, int axis) {
    const int ip = axis == 0 ? (i + 1) % n0 : i;
    const int jp = axis == 1 ? (j + 1) % n1 : j;
    const cxmat ovl =
        sub_block(bra[static_cast<size_t>(i) * n1 + j] *
                      ket[static_cast<size_t>(ip) * n1 + jp],
                  sel);
    const cxd u = ovl.determinant();
    require(std::abs(u) > 1e-12, ErrorKind::LostContinuity,
            "vanishing link overlap on the Chern grid; refine it");
    return u;
  };

  std::vector<double> flux(static_cast<size_t>(n0) * n1);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const cxd p = link(i, j, 0) * link((i + 1) % n0, j, 1) /
                    (link(i, (j + 1) % n1, 0) * link(i, j, 1));
      // arg of the plaquette product approximates -h^2 F_{12}.
      flux[static_cast<size_t>(i) * n1 + j] = -std::arg(p);
    }
  }
  return flux;
}

ChernResult quantize(double raw, double quantize_tol) {
  ChernResult res;
  res.raw = raw;
  res.integer = static_cast<int>(std::lround(raw));
  res.quality = std::abs(raw - res.integer);
  require(res.quality <= quantize_tol, ErrorKind::NonQuantized,
          "Chern sum " + std::to_string(raw) + " is not near an integer");
  return res;
}

ChernResult chern_link_plaquette(const FrameField& field, berry::Kind kind,
                                 const std::vector<int>& bands,
                                 const ParamGrid& grid) {
  const auto flux = plaquette_fluxes(field, kind, bands, grid);
  double sum = 0.0;
  for (double f : flux) sum += f;
  return quantize(sum / kTwoPi, field.tolerances().quantize_tol);
}

ChernResult chern_curvature_sum(const FrameField& field, berry::Kind kind,
                                const std::vector<int>& bands,
                                const ParamGrid& grid, double h) {
  validate_closed_2d(grid);
  const auto sel = resolve_bands(bands, field.dim());
  const double cell = grid.axes[0].spacing() * grid.axes[1].spacing();
  double sum = 0.0;
  for (int i = 0; i < grid.axes[0].size; ++i) {
    for (int j = 0; j < grid.axes[1].size; ++j) {
      // F_{12} = d_1 A^2 - d_2 A^1 - i [A^1, A^2]  (axis0 = 1, axis1 = 2)
      const cxmat f = curvature_at(field, kind, sel, grid.point({i, j}),
                                   /*mu=*/1, /*nu=*/0, h);
      sum += f.trace().real() * cell;
    }
  }
  return quantize(sum / kTwoPi, field.tolerances().quantize_tol);
}

}  // namespace nhb::topology
