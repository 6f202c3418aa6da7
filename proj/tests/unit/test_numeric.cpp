#include <doctest.h>

#include "nhb/models.hpp"
#include "nhb/numeric.hpp"

#include <cmath>

using namespace nhb;
using numeric::eig_general;

namespace {

// Independent eigenvalue oracle for 2x2: roots of the characteristic
// polynomial via the quadratic formula.
std::pair<cxd, cxd> char_poly_roots(const cxmat& m) {
  const cxd tr = m(0, 0) + m(1, 1);
  const cxd det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const cxd disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

}  // namespace

TEST_CASE("eig_general: diagonal input") {
  cxmat m = cxmat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  const auto sys = eig_general(m);
  CHECK(std::abs(sys.eigenvalues(0) - 1.0) < 1e-14);
  CHECK(std::abs(sys.eigenvalues(1) - 2.0) < 1e-14);
  CHECK((sys.right - cxmat::Identity(2, 2)).norm() < 1e-12);
  CHECK((sys.left - cxmat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("eig_general: sigma_x eigenvectors up to phase") {
  cxmat sx(2, 2);
  sx << 0, 1, 1, 0;
  const auto sys = eig_general(sx);
  CHECK(std::abs(sys.eigenvalues(0) + 1.0) < 1e-14);
  CHECK(std::abs(sys.eigenvalues(1) - 1.0) < 1e-14);
  for (int k = 0; k < 2; ++k) {
    const cxvec v = sys.right.col(k);
    CHECK(std::abs(std::abs(v(0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(v(0) - (k == 0 ? -1.0 : 1.0) * v(1)) < 1e-12);
  }
}

TEST_CASE("eig_general: pseudo-Hermitian point against the root oracle") {
  const cxmat h = models::build_pseudo_hermitian(2.0, 1.0, 1.0, 0.0);
  const auto [lo, hi] = char_poly_roots(h);
  const double l = std::sqrt(2.0 * 2.0 - 1.0 - 1.0);  // sqrt(t^2 - x^2 - y^2)
  CHECK(std::abs(lo - cxd(-l, 0.0)) < 1e-12);
  CHECK(std::abs(hi - cxd(l, 0.0)) < 1e-12);

  const auto sys = eig_general(h);
  CHECK(std::abs(sys.eigenvalues(0) - lo) < 1e-12);
  CHECK(std::abs(sys.eigenvalues(1) - hi) < 1e-12);
  CHECK((h * sys.right - sys.right * sys.eigenvalues.asDiagonal()).norm() <
        1e-10 * std::max(1.0, h.norm()));
  CHECK((sys.left * sys.right - cxmat::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("eig_general: residual invariants on random matrices") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    numeric::Rng rng(seed);
    const cxmat m = rng.gaussian_matrix(5, 5);
    const auto sys = eig_general(m);
    CHECK((m * sys.right - sys.right * sys.eigenvalues.asDiagonal()).norm() <=
          1e-10 * m.norm());
    CHECK((sys.left * sys.right - cxmat::Identity(5, 5)).norm() <= 1e-10);
    // deterministic ordering
    for (int k = 0; k + 1 < 5; ++k) {
      const cxd a = sys.eigenvalues(k), b = sys.eigenvalues(k + 1);
      CHECK((a.real() < b.real() ||
             (a.real() == b.real() && a.imag() <= b.imag())));
    }
  }
}

TEST_CASE("eig_general: holds up at dimension 20") {
  numeric::Rng rng(77);
  const cxmat m = rng.gaussian_matrix(20, 20);
  const auto sys = eig_general(m);
  CHECK((m * sys.right - sys.right * sys.eigenvalues.asDiagonal()).norm() <=
        1e-10 * m.norm());
  CHECK((sys.left * sys.right - cxmat::Identity(20, 20)).norm() <= 1e-10);
}

TEST_CASE("eig_general: near-defective input is rejected") {
  cxmat m(2, 2);
  m << 0.0, 1.0, 1e-18, 0.0;  // nearly a Jordan block; eigenvectors coalesce
  CHECK_THROWS_AS(eig_general(m), Error);
}

TEST_CASE("sqrt_posdef: identity and diagonal") {
  CHECK((numeric::sqrt_posdef(cxmat::Identity(3, 3)) - cxmat::Identity(3, 3))
            .norm() < 1e-13);
  cxmat d = cxmat::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const cxmat q = numeric::sqrt_posdef(d);
  CHECK(std::abs(q(0, 0) - 2.0) < 1e-13);
  CHECK(std::abs(q(1, 1) - 3.0) < 1e-13);
}

TEST_CASE("sqrt_posdef: metric reconstruction and positivity") {
  const auto field = models::make_pseudo_hermitian_hyperbolic(1.0, 0.0);
  const auto frame = field.frame({0.0, 1.0});  // (lambda, xi) = (0, 1)
  const cxmat eta = frame.l.adjoint() * frame.l;
  const cxmat q = numeric::sqrt_posdef(eta);
  CHECK((q * q - eta).norm() < 1e-12);
  CHECK(numeric::hermiticity_residual(q) < 1e-13);
  CHECK((q * eta - eta * q).norm() < 1e-12);  // unique root commutes with input
}

TEST_CASE("sqrt_posdef: rejects indefinite input") {
  cxmat m = cxmat::Identity(2, 2);
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(numeric::sqrt_posdef(m), Error);
}

TEST_CASE("polar_decompose: unitary and positive-diagonal limits") {
  numeric::Rng rng(3);
  const Eigen::HouseholderQR<cxmat> qr(rng.gaussian_matrix(3, 3));
  const cxmat u0 = qr.householderQ();
  auto f = numeric::polar_decompose(u0);
  CHECK((f.u - u0).norm() < 1e-12);
  CHECK((f.p - cxmat::Identity(3, 3)).norm() < 1e-12);

  cxmat d = cxmat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  f = numeric::polar_decompose(d);
  CHECK((f.u - cxmat::Identity(2, 2)).norm() < 1e-12);
  CHECK((f.p - d).norm() < 1e-12);
}

TEST_CASE("polar_decompose: reconstruction against the sqrt oracle") {
  numeric::Rng rng(11);
  const cxmat t = rng.gaussian_matrix(3, 3) + 3.0 * cxmat::Identity(3, 3);
  const auto f = numeric::polar_decompose(t);
  CHECK((f.u * f.p - t).norm() < 1e-12);
  CHECK((f.u.adjoint() * f.u - cxmat::Identity(3, 3)).norm() < 1e-12);
  // U from T (T^dag T)^{-1/2}, an independent route
  const cxmat p_oracle = numeric::sqrt_posdef(t.adjoint() * t);
  const cxmat u_oracle = t * p_oracle.partialPivLu().inverse();
  CHECK((f.u - u_oracle).norm() < 1e-10);
  CHECK((f.p - p_oracle).norm() < 1e-10);
}

TEST_CASE("finite_diff: constant and linear fields") {
  auto constant = [](const Point&) { return cxmat::Identity(2, 2); };
  CHECK(numeric::finite_diff(constant, {0.3, 0.4}, 0, 1e-5).norm() < 1e-12);
  auto linear = [](const Point& p) { return cxmat(p[0] * cxmat::Identity(2, 2)); };
  CHECK((numeric::finite_diff(linear, {0.3}, 0, 1e-5) - cxmat::Identity(2, 2))
            .norm() < 1e-10);
}

TEST_CASE("finite_diff: closed-form map derivative, Richardson ratio near 4") {
  auto s_field = [](const Point& p) {
    return models::analytic_hermitizing_map(p[1], p[0]);
  };
  const Point p{0.0, 1.0};
  const cxmat exact = models::analytic_hermitizing_map_dxi(1.0, 0.0);
  const double e1 = (numeric::finite_diff(s_field, p, 1, 2e-3) - exact).norm();
  const double e2 = (numeric::finite_diff(s_field, p, 1, 1e-3) - exact).norm();
  CHECK(e2 < 1e-6);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("rng: determinism") {
  numeric::Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("fix_column_phases: ties resolve to the highest index") {
  cxmat m(2, 1);
  m << cxd(0.0, 1.0) / std::sqrt(2.0), cxd(-1.0, 0.0) / std::sqrt(2.0);
  numeric::fix_column_phases(m);
  CHECK(m(1, 0).real() > 0.0);
  CHECK(std::abs(m(1, 0).imag()) < 1e-15);
}
