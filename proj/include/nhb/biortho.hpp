#pragma once

#include <functional>

#include "nhb/grid.hpp"
#include "nhb/numeric.hpp"

namespace nhb::biortho {

/// Paired right/left eigenvector matrices with their eigenvalues.
/// Rights are columns of `r`, lefts are rows of `l`, and l * r == identity up
/// to tol_biorth. Left rows are not conjugates of the right columns.
struct BiorthFrame {
  cxmat r;
  cxmat l;
  cxvec energies;

  int dim() const { return static_cast<int>(r.rows()); }
  double biorth_residual() const {
    return (l * r - cxmat::Identity(r.rows(), r.cols())).norm();
  }
};

/// Invertible frame change acting as r' = r * t, l' = inv * l.
struct FrameTransform {
  cxmat t;
  cxmat inv;

  static FrameTransform from(const cxmat& t, const Tolerances& tol = {});
  static FrameTransform identity(int n);
  static FrameTransform diagonal(const cxvec& entries, const Tolerances& tol = {});
};

BiorthFrame biorthonormalize(const cxmat& r_raw, const cxvec& energies,
                             const Tolerances& tol = {});

BiorthFrame apply_transform(const BiorthFrame& frame, const FrameTransform& t);

/// Deterministic GL(N,C) sample: T = U * P with U unitary (QR of a Gaussian
/// matrix) and P positive-definite with eigenvalue logs uniform in
/// [-log_scale, log_scale], so cond(T) <= exp(2*log_scale).
FrameTransform random_gl(int n, uint64_t seed, double log_scale);

/// Maximum-total-score assignment (Hungarian method on -score).
/// Returns perm with perm[row] = assigned column.
std::vector<int> hungarian_max(const Eigen::MatrixXd& score);

using FrameProvider = std::function<BiorthFrame(const Point&)>;

/// Permute and phase-adjust `next` (within the per-band gauge freedom) so each
/// column pairs with and overlaps positively the corresponding column of
/// `ref`. Pairing maximizes total biorthogonal overlap |l_ref * r_next|^2.
/// Throws LostContinuity when the best overlap falls below tol.overlap_floor.
BiorthFrame align_to(const BiorthFrame& ref, const BiorthFrame& next,
                     const Tolerances& tol = {});

/// Gauge-continuous frames along a path: the first point uses the provider's
/// own gauge, every later point is aligned to its predecessor. Throws
/// GapClosure when adjacent sorted eigenvalues approach within tol.gap_floor.
std::vector<BiorthFrame> smooth_gauge_path(const FrameProvider& provider,
                                           const ParamPath& path,
                                           const Tolerances& tol = {});

double min_eigenvalue_gap(const cxvec& energies);

}  // namespace nhb::biortho
