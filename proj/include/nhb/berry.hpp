#pragma once

#include "nhb/frame_field.hpp"

#include <map>

namespace nhb::berry {

/// Connection flavors. The four conventional kinds pair left/right
/// eigenvectors and are generally non-Hermitian; the covariant kind and its
/// Hermitian-frame cross-check are Hermitian (real-valued) in every frame.
enum class Kind { LL, LR, RL, RR, CBC, HermitianFrame };

const char* kind_name(Kind k);

struct ConnectionField {
  std::vector<cxmat> comp;  // one n_sel x n_sel matrix per parameter axis
  Point point;
  Kind kind = Kind::LR;
  std::vector<int> bands;
  double xcheck_residual = 0.0;  // eta-form vs left-form agreement (covariant kind)

  double herm_residual() const;
};

struct Distortion {
  std::vector<cxmat> comp;
  Point point;
  std::vector<int> bands;
};

using TransformField = FrameField::TransformFn;

std::vector<int> all_bands(int dim);

/// The four conventional connections A^{ab}_mu = i <psi^a_m | d_mu psi^b_n>
/// for the selected bands, by central differences of the field's frames.
std::map<Kind, ConnectionField> conventional_connections(
    const FrameField& field, const Point& p, const std::vector<int>& bands = {},
    double step = 0.0);

/// Covariant connection A_mu = i <psi^R_m| eta (d_mu + Gamma^mu) |psi^R_n>.
/// Both the eta-form and the left-form i<L|dR> + i<L|Gamma R> are evaluated;
/// their divergence beyond tol.xcheck_tol throws CrossCheckFailure (it
/// signals an inconsistent eta/Gamma/frame pairing).
ConnectionField covariant_connection(const FrameField& field, const Point& p,
                                     const std::vector<int>& bands = {},
                                     double step = 0.0, bool crosscheck = true);

/// Independent route: A_mu = i Phi^dag d_mu Phi with Phi = S R unitary.
/// Throws NotUnitaryFrame if Phi fails unitarity at tol.tol_unitary.
ConnectionField hermitian_frame_connection(const FrameField& field, const Point& p,
                                           const std::vector<int>& bands = {},
                                           double step = 0.0);

/// Distortion Xi^mu = i <R| eta (Gamma'^mu - Gamma^mu) |R> between a frame
/// field and its primed (transformed) version, at the same point.
Distortion distortion_tensor(const FrameField& base, const FrameField& primed,
                             const Point& p, const std::vector<int>& bands = {},
                             double step = 0.0);

/// Low-level form taking precomputed ingredients.
Distortion distortion_tensor(const biortho::BiorthFrame& frame, const cxmat& eta,
                             const metric::GammaField& gamma,
                             const metric::GammaField& gamma_prime,
                             const std::vector<int>& bands);

/// Affine law A'_mu = T^-1 (A_mu + Xi_mu) T + i T^-1 d_mu T.
ConnectionField affine_transform(const ConnectionField& conn, const Distortion& xi,
                                 const TransformField& t_field, const Point& p,
                                 double step, const Tolerances& tol = {});

/// Applies the affine law and verifies it against the covariant connection
/// computed directly in the primed frame; throws CrossCheckFailure beyond
/// tol.xcheck_tol. Returns the law-side result with the residual recorded.
ConnectionField affine_transform_checked(const FrameField& base,
                                         const FrameField& primed,
                                         const TransformField& t_field,
                                         const Point& p,
                                         const std::vector<int>& bands = {},
                                         double step = 0.0);

/// M = Phi' T^-1 Phi^dag, the operator carrying one Hermitizing map into the
/// other (S' = M S).
cxmat transition_operator(const cxmat& phi_prime, const cxmat& t, const cxmat& phi,
                          const Tolerances& tol = {});

struct TransitionCheck {
  cxmat m;
  double s_recon_residual;   // ||S' - M S||_F
  double gamma_residual;     // ||(Gamma' - Gamma) - S^-1 (M^-1 dM) S||_F, max over axes
};

TransitionCheck transition_check(const FrameField& base, const FrameField& primed,
                                 const TransformField& t_field, const Point& p,
                                 double step = 0.0);

}  // namespace nhb::berry
