#pragma once

#include "nhb/berry.hpp"

namespace nhb::topology {

/// Per-axis connection components evaluated at a point.
using ConnProvider = std::function<std::vector<cxmat>(const Point&)>;

/// Point evaluator for one connection kind over the selected bands.
ConnProvider connection_provider(const FrameField& field, berry::Kind kind,
                                 const std::vector<int>& bands = {},
                                 double step = 0.0);

/// F_{nu mu} = d_nu A^mu - d_mu A^nu - i [A^nu, A^mu], evaluated on a 3x3
/// frame patch held in a single local gauge (for smooth fields the patch is
/// just the field's own gauge). `h` is both the patch spacing and the inner
/// finite-difference step.
cxmat curvature_at(const FrameField& field, berry::Kind kind,
                   const std::vector<int>& bands, const Point& p, int mu, int nu,
                   double h = 1e-4);

/// Curvature of the affine-shifted connection, pushed to the primed frame:
/// F' = T^-1 (d(A + Xi) - i (A+Xi) wedge (A+Xi)) T. With crosscheck on, the
/// result is compared against the curvature computed directly in the primed
/// frame and CrossCheckFailure is thrown beyond tol.xcheck_tol.
cxmat transformed_curvature_at(const FrameField& base, const FrameField& primed,
                               const berry::TransformField& t_field,
                               const std::vector<int>& bands, const Point& p,
                               int mu, int nu, double h = 1e-4,
                               bool crosscheck = true);

/// Trapezoidal loop integral of an Abelian (single-band) connection.
cxd berry_phase_abelian(const ConnProvider& conn, const ParamPath& path);

/// Gauge-invariant discrete loop phase of one band: minus the accumulated
/// argument of successive frame overlaps along a closed path (left-right
/// overlaps for conventional kinds, Hermitized-frame overlaps for the
/// covariant kind). Reported in (-pi, pi].
double discrete_loop_phase(const FrameField& field, berry::Kind kind, int band,
                           const ParamPath& path);

/// Path-ordered product of exp(i A . dl) along the path, with uniform
/// segment subdivision until the product stabilizes below refine_tol.
cxmat wilson_loop(const ConnProvider& conn, const ParamPath& path,
                  double refine_tol = 1e-9, int max_refine = 6);

struct ChernResult {
  int integer = 0;
  double raw = 0.0;
  double quality = 0.0;  // |raw - integer|
};

/// Per-plaquette field-strength angles of the link-variable discretization on
/// a closed 2D grid, row-major. Links are determinants of band-block
/// overlaps: <L(p)|R(q)> for the conventional left-right kind, Hermitized
/// frame overlaps Phi(p)^dag Phi(q) for the covariant kind.
std::vector<double> plaquette_fluxes(const FrameField& field, berry::Kind kind,
                                     const std::vector<int>& bands,
                                     const ParamGrid& grid);

/// Gauge-independent Chern number from link plaquettes. Throws NonQuantized
/// if |raw - nearest integer| exceeds tol.quantize_tol.
ChernResult chern_link_plaquette(const FrameField& field, berry::Kind kind,
                                 const std::vector<int>& bands,
                                 const ParamGrid& grid);

/// Chern number by direct curvature quadrature (the independent route).
ChernResult chern_curvature_sum(const FrameField& field, berry::Kind kind,
                                const std::vector<int>& bands,
                                const ParamGrid& grid, double h = 1e-4);

ChernResult quantize(double raw, double quantize_tol);

void validate_closed_2d(const ParamGrid& grid);

}  // namespace nhb::topology
