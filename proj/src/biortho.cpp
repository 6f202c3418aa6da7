#include "nhb/biortho.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhb::biortho {

FrameTransform FrameTransform::from(const cxmat& t, const Tolerances& tol) {
  require(t.rows() == t.cols(), ErrorKind::DimensionMismatch, "transform not square");
  require(std::abs(t.determinant()) > tol.det_floor, ErrorKind::SingularInput,
          "transform is singular");
  FrameTransform f;
  f.t = t;
  f.inv = t.partialPivLu().inverse();
  return f;
}

FrameTransform FrameTransform::identity(int n) {
  FrameTransform f;
  f.t = cxmat::Identity(n, n);
  f.inv = f.t;
  return f;
}

FrameTransform FrameTransform::diagonal(const cxvec& entries, const Tolerances& tol) {
  const int n = static_cast<int>(entries.size());
  cxmat t = cxmat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    require(std::abs(entries(i)) > tol.det_floor, ErrorKind::SingularInput,
            "zero diagonal rescale entry");
    t(i, i) = entries(i);
  }
  return from(t, tol);
}

BiorthFrame biorthonormalize(const cxmat& r_raw, const cxvec& energies,
                             const Tolerances& tol) {
  require(r_raw.rows() == r_raw.cols(), ErrorKind::DimensionMismatch,
          "frame matrix not square");
  const double cond = numeric::cond_2norm(r_raw);
  require(cond <= tol.cond_max, ErrorKind::NearDefective,
          "frame condition number " + std::to_string(cond) + " exceeds cond_max");
  BiorthFrame f;
  f.r = r_raw;
  f.l = r_raw.partialPivLu().inverse();
  f.energies = energies;
  return f;
}

BiorthFrame apply_transform(const BiorthFrame& frame, const FrameTransform& t) {
  require(frame.r.cols() == t.t.rows(), ErrorKind::DimensionMismatch,
          "frame/transform dimensions differ");
  BiorthFrame out;
  out.r = frame.r * t.t;
  out.l = t.inv * frame.l;
  out.energies = frame.energies;
  return out;
}

FrameTransform random_gl(int n, uint64_t seed, double log_scale) {
  require(n >= 1, ErrorKind::ValidationError, "random_gl needs n >= 1");
  require(log_scale >= 0.0, ErrorKind::ValidationError, "log_scale must be >= 0");
  numeric::Rng rng(seed);

  const Eigen::HouseholderQR<cxmat> qr_u(rng.gaussian_matrix(n, n));
  cxmat u = qr_u.householderQ();

  const Eigen::HouseholderQR<cxmat> qr_v(rng.gaussian_matrix(n, n));
  cxmat v = qr_v.householderQ();

  rvec d(n);
  for (int i = 0; i < n; ++i) d(i) = std::exp(rng.uniform(-log_scale, log_scale));
  const cxmat p = v * d.asDiagonal() * v.adjoint();

  return FrameTransform::from(u * p);
}

namespace {

// O(n^3) Hungarian algorithm (potentials + augmenting paths) on a cost matrix.
std::vector<int> hungarian_min(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<int> hungarian_max(const Eigen::MatrixXd& score) {
  return hungarian_min(-score);
}

BiorthFrame align_to(const BiorthFrame& ref, const BiorthFrame& next,
                     const Tolerances& tol) {
  const int n = ref.dim();
  require(next.dim() == n, ErrorKind::DimensionMismatch, "frame dims differ");

  // Biorthogonal overlaps <L_ref_m | R_next_n>; row m = ref band, col n = next band.
  const cxmat ovl = ref.l * next.r;
  Eigen::MatrixXd score(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) score(m, k) = std::norm(ovl(m, k));
  const std::vector<int> match = hungarian_max(score);

  BiorthFrame out;
  out.r.resize(n, n);
  out.l.resize(n, n);
  out.energies.resize(n);
  for (int m = 0; m < n; ++m) {
    const int k = match[m];
    const cxd o = ovl(m, k);
    const double mag = std::abs(o);
    require(mag > tol.overlap_floor, ErrorKind::LostContinuity,
            "successive-frame overlap " + std::to_string(mag) +
                " below overlap_floor; refine the path");
    const cxd phase = std::conj(o) / mag;  // makes the paired overlap real positive
    out.r.col(m) = next.r.col(k) * phase;
    out.l.row(m) = next.l.row(k) / phase;
    out.energies(m) = next.energies(k);
  }
  return out;
}

double min_eigenvalue_gap(const cxvec& energies) {
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < energies.size(); ++i)
    for (int j = i + 1; j < energies.size(); ++j)
      gap = std::min(gap, std::abs(energies(i) - energies(j)));
  return gap;
}

std::vector<BiorthFrame> smooth_gauge_path(const FrameProvider& provider,
                                           const ParamPath& path,
                                           const Tolerances& tol) {
  path.validate();
  std::vector<BiorthFrame> frames;
  frames.reserve(path.pts.size());
  for (size_t s = 0; s < path.pts.size(); ++s) {
    BiorthFrame f = provider(path.pts[s]);
    const double gap = min_eigenvalue_gap(f.energies);
    require(gap > tol.gap_floor, ErrorKind::GapClosure,
            "eigenvalue gap " + std::to_string(gap) +
                " below gap_floor along path (step " + std::to_string(s) + ")");
    if (s == 0) {
      frames.push_back(std::move(f));
    } else {
      frames.push_back(align_to(frames.back(), f, tol));
    }
  }
  return frames;
}

}  // namespace nhb::biortho
