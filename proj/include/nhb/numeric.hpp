#pragma once

#include <functional>

#include "nhb/types.hpp"

namespace nhb::numeric {

/// Dense spectral data of a (generally non-Hermitian) matrix.
/// Right vectors are the columns of `right`; left vectors are the rows of
/// `left` and satisfy left * right == identity by construction (left is the
/// inverse of right), so the frame is biorthonormal up to inversion error.
struct EigenSystem {
  cxvec eigenvalues;  // sorted by (Re, Im), stable on exact ties
  cxmat right;        // unit-norm columns, phase-fixed
  cxmat left;         // rows
};

/// Hard cap on the dense problem size this library is built for.
inline constexpr int kMaxDim = 64;

/// General complex eigendecomposition with a deterministic ordering and gauge:
/// eigenvalues sorted lexicographically by (Re, Im); each right vector is
/// normalized to unit 2-norm and rotated so its largest-magnitude entry is
/// real positive (ties within a small relative band resolve to the highest
/// index); left vectors come from inverting the right-vector matrix.
///
/// Throws NonConvergence if the QR iteration fails and NearDefective if the
/// right-vector condition number exceeds tol.cond_max (exceptional-point
/// proximity).
EigenSystem eig_general(const cxmat& m, const Tolerances& tol = {});

/// Unique positive-definite square root of a Hermitian positive-definite matrix.
cxmat sqrt_posdef(const cxmat& p, const Tolerances& tol = {});

struct PolarFactors {
  cxmat u;  // unitary
  cxmat p;  // Hermitian positive-definite
};

/// T = U * P with U unitary and P Hermitian positive-definite (via SVD).
PolarFactors polar_decompose(const cxmat& t, const Tolerances& tol = {});

using MatrixField = std::function<cxmat(const Point&)>;

/// Second-order central difference of a matrix-valued field.
cxmat finite_diff(const MatrixField& field, const Point& point, int component,
                  double step);

/// 2-norm condition number (exact SVD; fine at these sizes).
double cond_2norm(const cxmat& m);

/// Rotate each column so its largest-magnitude entry is real positive.
/// Magnitude ties within `tie_rel` of the maximum resolve to the highest
/// index, which keeps the convention stable when several entries share the
/// same modulus across a parameter sweep.
void fix_column_phases(cxmat& m, double tie_rel = 1e-8);

double hermiticity_residual(const cxmat& m);
bool is_hermitian(const cxmat& m, double tol);

inline bool all_finite(const cxmat& m) { return m.allFinite(); }

/// Deterministic random streams: explicit uniform/Gaussian maps over
/// mt19937_64 so results are identical across platforms and library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  double uniform();                     // [0, 1)
  double uniform(double lo, double hi); // [lo, hi)
  double gaussian();                    // Box-Muller, mean 0, sd 1
  cxd gaussian_cx();

  cxmat gaussian_matrix(int rows, int cols);

 private:
  uint64_t next_u64();
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nhb::numeric
