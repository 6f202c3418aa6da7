#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhb {

using cxd = std::complex<double>;
using cxmat = Eigen::MatrixXcd;
using cxvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

/// A point in model parameter space, indexed per the model's axis order.
using Point = std::vector<double>;

inline constexpr const char* kVersion = "0.1.0";

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorKind {
  NonConvergence,
  NearDefective,
  NotPositiveDefinite,
  SingularInput,
  DimensionMismatch,
  DegenerateMetric,
  StencilCrossesDegeneracy,
  GapClosure,
  LostContinuity,
  CrossCheckFailure,
  NotUnitaryFrame,
  NonQuantized,
  StepTooLarge,
  Overflow,
  NonAdiabatic,
  InvalidRadius,
  EvaluationFailure,
  FormatError,
  NonSquare,
  GridMismatch,
  ParseError,
  ValidationError,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  /// True for errors caused by bad user input rather than numerics.
  bool is_config_error() const {
    return kind_ == ErrorKind::ParseError || kind_ == ErrorKind::ValidationError ||
           kind_ == ErrorKind::FormatError || kind_ == ErrorKind::NonSquare ||
           kind_ == ErrorKind::GridMismatch;
  }

 private:
  ErrorKind kind_;
};

/// Numerical tolerances and discretization defaults. All overridable via config.
struct Tolerances {
  double tol_eig = 1e-10;
  double tol_biorth = 1e-10;
  double tol_herm = 1e-10;
  double tol_unitary = 1e-10;
  double tol_recon = 1e-10;
  double posdef_floor = 1e-12;
  double det_floor = 1e-300;
  double cond_max = 1e8;
  double step = 1e-5;         // finite-difference step for parameter derivatives
  double gap_floor = 1e-6;    // minimal admissible eigenvalue gap along paths
  double overlap_floor = 0.9; // minimal successive-frame overlap for continuity
  double deg_floor = 1e-8;    // relative spacing below which the metric counts as degenerate
  double xcheck_tol = 1e-6;   // two-route consistency tolerance (FD-dominated)
  double quantize_tol = 0.05; // |raw - nearest integer| bound for Chern numbers
  double fid_floor = 0.99;    // adiabatic fidelity floor
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) throw Error(kind, msg);
}

}  // namespace nhb
