#include "nhb/numeric.hpp"

#include "nhb/grid.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nhb {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NearDefective: return "NearDefective";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::StencilCrossesDegeneracy: return "StencilCrossesDegeneracy";
    case ErrorKind::GapClosure: return "GapClosure";
    case ErrorKind::LostContinuity: return "LostContinuity";
    case ErrorKind::CrossCheckFailure: return "CrossCheckFailure";
    case ErrorKind::NotUnitaryFrame: return "NotUnitaryFrame";
    case ErrorKind::NonQuantized: return "NonQuantized";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NonAdiabatic: return "NonAdiabatic";
    case ErrorKind::InvalidRadius: return "InvalidRadius";
    case ErrorKind::EvaluationFailure: return "EvaluationFailure";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

ParamPath axis_segment(const Point& base, int axis, double from, double to,
                       int n_points, bool closed) {
  require(n_points >= 2, ErrorKind::ValidationError, "segment needs >= 2 points");
  ParamPath path;
  path.closed = closed;
  path.pts.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    Point p = base;
    p[axis] = from + (to - from) * static_cast<double>(i) / (n_points - 1);
    path.pts.push_back(p);
  }
  return path;
}

}  // namespace nhb

namespace nhb::numeric {

void fix_column_phases(cxmat& m, double tie_rel) {
  for (int j = 0; j < m.cols(); ++j) {
    double max_abs = 0.0;
    for (int i = 0; i < m.rows(); ++i) max_abs = std::max(max_abs, std::abs(m(i, j)));
    if (max_abs == 0.0) continue;
    int pick = -1;
    for (int i = static_cast<int>(m.rows()) - 1; i >= 0; --i) {
      if (std::abs(m(i, j)) >= max_abs * (1.0 - tie_rel)) {
        pick = i;
        break;
      }
    }
    const cxd v = m(pick, j);
    m.col(j) *= std::conj(v) / std::abs(v);
  }
}

double hermiticity_residual(const cxmat& m) {
  return (m - m.adjoint()).norm();
}

bool is_hermitian(const cxmat& m, double tol) {
  return hermiticity_residual(m) <= tol * std::max(1.0, m.norm());
}

double cond_2norm(const cxmat& m) {
  Eigen::JacobiSVD<cxmat> svd(m);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / (s(s.size() - 1));
}

EigenSystem eig_general(const cxmat& m, const Tolerances& tol) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "matrix not square");
  const int n = static_cast<int>(m.rows());
  require(n >= 1 && n <= kMaxDim, ErrorKind::DimensionMismatch,
          "dimension outside supported range [1, " + std::to_string(kMaxDim) + "]");
  require(all_finite(m), ErrorKind::EvaluationFailure, "non-finite matrix entries");

  Eigen::ComplexEigenSolver<cxmat> solver(m, /*computeEigenvectors=*/true);
  require(solver.info() == Eigen::Success, ErrorKind::NonConvergence,
          "complex QR iteration did not converge");

  const cxvec vals = solver.eigenvalues();
  const cxmat vecs = solver.eigenvectors();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
    return vals(a).imag() < vals(b).imag();
  });

  EigenSystem sys;
  sys.eigenvalues.resize(n);
  sys.right.resize(n, n);
  for (int k = 0; k < n; ++k) {
    sys.eigenvalues(k) = vals(order[k]);
    sys.right.col(k) = vecs.col(order[k]).normalized();
  }
  fix_column_phases(sys.right);

  const double cond = cond_2norm(sys.right);
  require(cond <= tol.cond_max, ErrorKind::NearDefective,
          "right-eigenvector condition number " + std::to_string(cond) +
              " exceeds cond_max (exceptional-point proximity)");

  sys.left = sys.right.partialPivLu().inverse();
  return sys;
}

cxmat sqrt_posdef(const cxmat& p, const Tolerances& tol) {
  require(p.rows() == p.cols(), ErrorKind::DimensionMismatch, "matrix not square");
  require(is_hermitian(p, tol.tol_herm), ErrorKind::NotPositiveDefinite,
          "input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<cxmat> es(p);
  require(es.info() == Eigen::Success, ErrorKind::NonConvergence,
          "Hermitian eigensolve failed");
  const rvec d = es.eigenvalues();
  require(d.minCoeff() > tol.posdef_floor, ErrorKind::NotPositiveDefinite,
          "minimum eigenvalue " + std::to_string(d.minCoeff()) +
              " at or below posdef_floor");
  return es.eigenvectors() * d.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

PolarFactors polar_decompose(const cxmat& t, const Tolerances& tol) {
  require(t.rows() == t.cols(), ErrorKind::DimensionMismatch, "matrix not square");
  const double adet = std::abs(t.determinant());
  require(adet > tol.det_floor, ErrorKind::SingularInput,
          "|det| below det_floor, polar factor undefined");
  Eigen::JacobiSVD<cxmat> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  PolarFactors f;
  f.u = svd.matrixU() * svd.matrixV().adjoint();
  f.p = svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().adjoint();
  return f;
}

cxmat finite_diff(const MatrixField& field, const Point& point, int component,
                  double step) {
  require(step > 0.0, ErrorKind::ValidationError, "finite_diff step must be > 0");
  Point plus = point;
  Point minus = point;
  plus[component] += step;
  minus[component] -= step;
  return (field(plus) - field(minus)) / (2.0 * step);
}

uint64_t Rng::next_u64() {
  // splitmix64; fixed algorithm so streams are reproducible everywhere.
  state_ += 0x9E3779B97F4A7C15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  have_spare_ = true;
  spare_ = r * std::sin(kTwoPi * u2);
  return r * std::cos(kTwoPi * u2);
}

cxd Rng::gaussian_cx() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

cxmat Rng::gaussian_matrix(int rows, int cols) {
  cxmat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = gaussian_cx();
  return m;
}

}  // namespace nhb::numeric
