#include <doctest.h>

#include "nhb/frame_field.hpp"

#include <cmath>

using namespace nhb;

namespace {

const cxd kI(0.0, 1.0);

FrameField numeric_route_field() {
  auto m = models::make_pseudo_hermitian_hyperbolic(1.0, 0.0);
  m.map_s = nullptr;
  m.map_s_derivs.clear();
  return FrameField::from_model(m);
}

}  // namespace

TEST_CASE("metric_from_left: identity and the closed-form metric") {
  CHECK((metric::metric_from_left(cxmat::Identity(2, 2)) - cxmat::Identity(2, 2))
            .norm() < 1e-15);

  const double xi = 1.0, lambda = 0.0;
  const auto f = models::analytic_eigenframe(xi, lambda, 1.0, 0.0);
  const cxmat eta = metric::metric_from_left(f.l);
  CHECK(eta(0, 0).real() == doctest::Approx(1.5430806348));
  CHECK(eta(0, 1).real() == doctest::Approx(1.1752011936));
  CHECK(eta(0, 1).imag() == doctest::Approx(0.0));
  CHECK(numeric::hermiticity_residual(eta) < 1e-14);

  // generic lambda: off-diagonal carries e^{-i lambda} sinh(xi)
  const auto f2 = models::analytic_eigenframe(0.7, 1.2, 1.0, 0.0);
  const cxmat eta2 = metric::metric_from_left(f2.l);
  CHECK(std::abs(eta2(0, 1) - std::exp(-kI * 1.2) * std::sinh(0.7)) < 1e-14);
}

TEST_CASE("hermitizing_map: flat metric, spectral factors, closed-form map") {
  const auto flat = metric::hermitizing_map(cxmat::Identity(2, 2));
  CHECK((flat.s - cxmat::Identity(2, 2)).norm() < 1e-14);
  CHECK(flat.degenerate);  // identity metric has a fully degenerate spectrum

  const double xi = 0.8, lambda = 2.1;
  const auto f = models::analytic_eigenframe(xi, lambda, 1.0, 0.0);
  const auto md = metric::hermitizing_map(metric::metric_from_left(f.l));
  CHECK(!md.degenerate);
  CHECK(md.d(0) == doctest::Approx(std::exp(-xi)));
  CHECK(md.d(1) == doctest::Approx(std::exp(xi)));

  // Eigenvector columns up to the fixed phase convention: the metric
  // eigenbasis is (-e^{-i lambda}, 1)/sqrt2 and (e^{-i lambda}, 1)/sqrt2.
  const double rt = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(md.w(0, 0) + rt * std::exp(-kI * lambda)) < 1e-12);
  CHECK(std::abs(md.w(1, 0) - rt) < 1e-12);
  CHECK(std::abs(md.w(0, 1) - rt * std::exp(-kI * lambda)) < 1e-12);
  CHECK(std::abs(md.w(1, 1) - rt) < 1e-12);

  CHECK((md.s - models::analytic_hermitizing_map(xi, lambda)).norm() < 1e-12);
  CHECK((md.s.adjoint() * md.s - md.eta).norm() < 1e-12);
}

TEST_CASE("hermitizing_map: S^dag S reconstructs eta at random points") {
  numeric::Rng rng(21);
  for (int k = 0; k < 30; ++k) {
    const auto f = models::analytic_eigenframe(rng.uniform(0.1, 2.0),
                                               rng.uniform(0.0, kTwoPi), 1.0, 0.0);
    const cxmat eta = metric::metric_from_left(f.l);
    const auto md = metric::hermitizing_map(eta);
    CHECK((md.s.adjoint() * md.s - eta).norm() < 1e-10);
    CHECK((md.w * md.d.asDiagonal() * md.w.adjoint() - eta).norm() < 1e-10);
  }
}

TEST_CASE("hermitizing_map: rejects non-positive input") {
  cxmat m = cxmat::Identity(2, 2);
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(metric::hermitizing_map(m), Error);
}

TEST_CASE("metric_connection: closed-form components (numeric route)") {
  const auto field = numeric_route_field();
  numeric::Rng rng(31);
  for (int k = 0; k < 10; ++k) {
    const double lambda = rng.uniform(0.0, kTwoPi);
    const double xi = rng.uniform(0.1, 2.0);
    const auto gam = field.gamma({lambda, xi});
    cxmat g_lambda(2, 2), g_xi(2, 2);
    g_lambda << kI, 0, 0, 0;
    g_xi << 0, 0.5 * std::exp(-kI * lambda), 0.5 * std::exp(kI * lambda), 0;
    CHECK((gam.comp[0] - g_lambda).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((gam.comp[1] - g_xi).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("metric_connection: analytic registration matches the numeric route") {
  const auto analytic = FrameField::from_model(
      models::make_pseudo_hermitian_hyperbolic(1.0, 0.0));
  const auto numeric_f = numeric_route_field();
  const Point p{1.9, 0.6};
  const auto ga = analytic.gamma(p);
  const auto gn = numeric_f.gamma(p);
  CHECK((ga.comp[0] - gn.comp[0]).norm() < 1e-8);
  CHECK((ga.comp[1] - gn.comp[1]).norm() < 1e-8);
}

TEST_CASE("metric_connection: rescaled-frame components gain (tanh xi)/2 terms") {
  const auto base = FrameField::from_model(
      models::make_pseudo_hermitian_hyperbolic(1.0, 0.0));
  // Unit-normalizing rescale: rights scaled by 1/sqrt(cosh xi); the map then
  // becomes sqrt(cosh xi) S and the xi-component shifts by (tanh xi)/2 on the
  // diagonal.
  auto t_inv = [&base](const Point& q) {
    const cxmat t = norm_factor_transform(base)(q);
    return cxmat(t.partialPivLu().inverse());
  };
  const auto primed = base.transformed(t_inv);
  const Point p{0.4, 1.0};
  const auto gam = primed.gamma(p);
  cxmat g_lambda(2, 2), g_xi(2, 2);
  const double th = 0.5 * std::tanh(1.0);
  g_lambda << kI, 0, 0, 0;
  g_xi << th, 0.5 * std::exp(-kI * 0.4), 0.5 * std::exp(kI * 0.4), th;
  CHECK((gam.comp[0] - g_lambda).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((gam.comp[1] - g_xi).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("compatibility holds across 100 random points of the model") {
  const auto field = numeric_route_field();
  auto eta_field = [&field](const Point& q) { return field.metric_at(q); };
  numeric::Rng rng(71);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)};
    const auto gam = field.gamma(p);
    worst = std::max(worst, metric::compatibility_residual(eta_field, gam, p, 1e-5));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("compatibility_residual: holds for the model, detects a zeroed Gamma") {
  const auto field = numeric_route_field();
  auto eta_field = [&field](const Point& q) { return field.metric_at(q); };
  const Point p{0.5, 1.0};
  const auto gam = field.gamma(p);
  CHECK(metric::compatibility_residual(eta_field, gam, p, 1e-5) < 1e-8);

  metric::GammaField zeroed = gam;
  zeroed.comp[0] = cxmat::Zero(2, 2);
  zeroed.comp[1] = cxmat::Zero(2, 2);
  const double deta_scale =
      numeric::finite_diff(eta_field, p, 1, 1e-5).norm();
  const double res = metric::compatibility_residual(eta_field, zeroed, p, 1e-5);
  CHECK(res == doctest::Approx(deta_scale).epsilon(1e-6));
  CHECK(res > 0.1);
}

TEST_CASE("flatness_residual: pure-gauge map is flat, fabricated field is not") {
  const auto field = numeric_route_field();
  auto s_field = [&field](const Point& q) { return field.metric_data(q).s; };
  CHECK(metric::flatness_residual(s_field, {0.5, 1.0}, 0, 1, 1e-4) < 1e-6);

  // Gamma^lambda = xi sigma_x, Gamma^xi = 0 has d_xi Gamma^lambda = sigma_x,
  // so the curvature norm is ||sigma_x||_F = sqrt(2).
  auto fabricated = [](const Point& q, int axis) -> cxmat {
    cxmat sx(2, 2);
    sx << 0, 1, 1, 0;
    return axis == 0 ? cxmat(q[1] * sx) : cxmat(cxmat::Zero(2, 2));
  };
  const Point p{0.3, 0.7};
  const double h = 1e-4;
  auto d = [&](int of, int axis_comp) {
    Point q = p;
    q[of] += h;
    const cxmat plus = fabricated(q, axis_comp);
    q[of] -= 2 * h;
    return cxmat((plus - fabricated(q, axis_comp)) / (2 * h));
  };
  const cxmat f01 = d(0, 1) - d(1, 0) + fabricated(p, 0) * fabricated(p, 1) -
                    fabricated(p, 1) * fabricated(p, 0);
  CHECK(f01.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("hermitize_hamiltonian: trivial map, Hermiticity, closed form") {
  cxmat h(2, 2);
  h << cxd(0, 0), cxd(1, 0.3), cxd(0.2, 0), cxd(1, 0);
  CHECK((metric::hermitize_hamiltonian(h, cxmat::Identity(2, 2),
                                       cxmat::Zero(2, 2)) -
         h)
            .norm() < 1e-15);

  const auto field = FrameField::from_model(
      models::make_pseudo_hermitian_hyperbolic(1.0, 0.0));
  const auto model = models::make_pseudo_hermitian_hyperbolic(1.0, 0.0);
  numeric::Rng rng(17);
  for (int k = 0; k < 10; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)};
    const cxmat hh = metric::hermitize_hamiltonian(model.h(p), field.hermitizing(p),
                                                   cxmat::Zero(2, 2));
    CHECK(numeric::hermiticity_residual(hh) < 1e-9);
    // Static Hermitization of this family lands on -l sigma_x in the
    // metric-eigenbasis gauge fixed above (l = 1 here).
    cxmat expected(2, 2);
    expected << 0, -1, -1, 0;
    CHECK((hh - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  // A scalar rescaling of the map leaves the Hermitized operator unchanged.
  const Point p{1.0, 1.0};
  const cxmat s2 = std::sqrt(std::cosh(1.0)) * field.hermitizing(p);
  const cxmat hh2 =
      metric::hermitize_hamiltonian(model.h(p), s2, cxmat::Zero(2, 2));
  cxmat expected(2, 2);
  expected << 0, -1, -1, 0;
  CHECK((hh2 - expected).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(metric::hermitize_hamiltonian(h, cxmat::Zero(2, 2),
                                                cxmat::Zero(2, 2)),
                  Error);
}

TEST_CASE("hermitize_hamiltonian: time-dependent term enters as i dS S^-1") {
  numeric::Rng rng(23);
  const cxmat h = rng.gaussian_matrix(2, 2);
  const cxmat s = 2.0 * cxmat::Identity(2, 2) + 0.1 * rng.gaussian_matrix(2, 2);
  const cxmat ds = rng.gaussian_matrix(2, 2);
  const cxmat out = metric::hermitize_hamiltonian(h, s, ds);
  const cxmat s_inv = s.partialPivLu().inverse();
  CHECK((out - (s * h * s_inv + kI * ds * s_inv)).norm() < 1e-13);
}
