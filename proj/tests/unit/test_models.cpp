#include <doctest.h>

#include "nhb/models.hpp"

#include <cmath>

using namespace nhb;
using namespace nhb::models;

TEST_CASE("build_pseudo_hermitian: Pauli limits") {
  const cxmat sz = build_pseudo_hermitian(1, 0, 0, 0);
  CHECK(sz(0, 0) == cxd(1, 0));
  CHECK(sz(1, 1) == cxd(-1, 0));
  CHECK(sz(0, 1) == cxd(0, 0));

  const cxmat isy = build_pseudo_hermitian(0, 1, 0, 0);
  CHECK(isy(0, 1) == cxd(1, 0));
  CHECK(isy(1, 0) == cxd(-1, 0));
}

TEST_CASE("build_pseudo_hermitian: exact-phase eigenvalues") {
  const cxmat h = build_pseudo_hermitian(2, 1, 1, 0);
  const auto sys = numeric::eig_general(h);
  const double l = std::sqrt(2.0);
  CHECK(std::abs(sys.eigenvalues(0) - cxd(-l, 0)) < 1e-12);
  CHECK(std::abs(sys.eigenvalues(1) - cxd(l, 0)) < 1e-12);
  CHECK(classify_phase(2, 1, 1) == SpectralPhase::Exact);
  CHECK(classify_phase(1, 2, 1) == SpectralPhase::Broken);
}

TEST_CASE("hyperbolic_point: values and invariant") {
  const auto c0 = hyperbolic_point(1.0, 0.0, 0.37);
  CHECK(c0.t == doctest::Approx(1.0));
  CHECK(c0.x == doctest::Approx(0.0));
  CHECK(c0.y == doctest::Approx(0.0));

  const auto c1 = hyperbolic_point(1.0, 1.0, 0.0);
  CHECK(c1.t == doctest::Approx(1.5430806348));
  CHECK(c1.x == doctest::Approx(1.1752011936));

  const auto c2 = hyperbolic_point(1.0, 2.0, 0.7);
  CHECK(c2.t * c2.t - c2.x * c2.x - c2.y * c2.y == doctest::Approx(1.0));

  CHECK_THROWS_AS(hyperbolic_point(0.0, 1.0, 0.0), Error);
}

TEST_CASE("analytic_eigenframe: xi = 0 collapse and biorthonormality") {
  const auto f0 = analytic_eigenframe(0.0, 0.4, 1.0, 0.0);
  CHECK(std::abs(f0.r(0, 0)) < 1e-15);
  CHECK(std::abs(f0.r(1, 0) - cxd(1, 0)) < 1e-15);
  CHECK(std::abs(f0.r(0, 1) - std::exp(cxd(0, -0.4))) < 1e-15);
  CHECK(std::abs(f0.r(1, 1)) < 1e-15);

  const auto f = analytic_eigenframe(1.0, 0.3, 1.0, 0.0);
  CHECK(f.biorth_residual() < 1e-14);
  // <L_-|R_-> = cosh^2 - sinh^2 = 1 exactly
  const cxd d = (f.l.row(0) * f.r.col(0))(0, 0);
  CHECK(std::abs(d - cxd(1, 0)) < 1e-14);
}

TEST_CASE("analytic_eigenframe diagonalizes the model Hamiltonian") {
  const auto c = hyperbolic_point(1.0, 1.0, 0.0);
  const cxmat h = build_pseudo_hermitian(c.t, c.x, c.y, 0.0);
  const auto f = analytic_eigenframe(1.0, 0.0, 1.0, 0.0);
  CHECK((h * f.r - f.r * f.energies.asDiagonal()).norm() < 1e-12);
}

TEST_CASE("hyperbolic model: spectrum is a0 +- l over the manifold") {
  const auto field = make_pseudo_hermitian_hyperbolic(2.5, 0.3);
  numeric::Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.0, 2.0)};
    const auto sys = numeric::eig_general(field.h(p));
    CHECK(std::abs(sys.eigenvalues(0) - cxd(0.3 - 2.5, 0)) < 1e-10);
    CHECK(std::abs(sys.eigenvalues(1) - cxd(0.3 + 2.5, 0)) < 1e-10);
    CHECK(std::abs(sys.eigenvalues(0).imag()) < 1e-10);
  }
}

TEST_CASE("analytic and numeric frames agree up to per-band scale") {
  const auto field = make_pseudo_hermitian_hyperbolic(1.0, 0.0);
  numeric::Rng rng(8);
  for (int k = 0; k < 10; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)};
    const auto analytic = field.frame(p);
    const auto numeric_f = numeric_frame(field, p);
    for (int band = 0; band < 2; ++band) {
      const cxvec a = analytic.r.col(band);
      const cxvec b = numeric_f.r.col(band);
      const cxd scale = (a.adjoint() * b)(0, 0) / (a.adjoint() * a)(0, 0);
      CHECK((b - scale * a).norm() < 1e-10);
    }
  }
}

TEST_CASE("qwz: construction, Hermiticity, gap closure at m = 2") {
  const cxmat h0 = build_hermitian_qwz(0.0, 0.0, 0.0);
  CHECK((h0 - (-2.0) * (cxmat(2, 2) << 1, 0, 0, -1).finished()).norm() < 1e-15);

  numeric::Rng rng(12);
  for (int k = 0; k < 10; ++k) {
    const cxmat h = build_hermitian_qwz(rng.uniform(-3, 3), rng.uniform(0, kTwoPi),
                                        rng.uniform(0, kTwoPi));
    CHECK(numeric::hermiticity_residual(h) < 1e-15);
  }

  const auto sys = numeric::eig_general(build_hermitian_qwz(2.0, 0.0, 0.0) +
                                        1e-30 * cxmat::Identity(2, 2));
  CHECK(std::abs(sys.eigenvalues(0)) < 1e-12);
  CHECK(std::abs(sys.eigenvalues(1)) < 1e-12);
}

TEST_CASE("pseudo-Hermiticity residual vanishes across the exact phase") {
  const auto field = make_pseudo_hermitian_hyperbolic(1.0, 0.0);
  numeric::Rng rng(15);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.0, 2.0)};
    const auto f = field.frame(p);
    const cxmat eta = f.l.adjoint() * f.l;
    const cxmat h = field.h(p);
    worst = std::max(worst, (eta * h - h.adjoint() * eta).norm());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("make_builtin: dispatch and unknown names") {
  CHECK(make_builtin("qwz", {{"m", 1.0}}).spec.dim == 2);
  CHECK(make_builtin("pseudo_hermitian_cartesian", {}).spec.param_names.size() == 3);
  CHECK_THROWS_AS(make_builtin("nope", {}), Error);
}
