#include <doctest.h>

#include "nhb/berry.hpp"

#include <cmath>

using namespace nhb;

namespace {

const cxd kI(0.0, 1.0);

FrameField model_field() {
  return FrameField::from_model(models::make_pseudo_hermitian_hyperbolic(1.0, 0.0));
}

}  // namespace

TEST_CASE("conventional LR connection: closed-form components") {
  const auto field = model_field();
  for (double xi : {0.3, 1.0, 1.7}) {
    const Point p{1.1, xi};
    const auto conns = berry::conventional_connections(field, p, {0});
    const auto& lr = conns.at(berry::Kind::LR);
    const double sh = std::sinh(0.5 * xi);
    CHECK(std::abs(lr.comp[0](0, 0) - cxd(-sh * sh, 0)) < 1e-9);
    CHECK(std::abs(lr.comp[1](0, 0)) < 1e-9);
  }
  // frozen spot value at xi = 1: -sinh^2(1/2) = -0.271540
  const auto lr = berry::conventional_connections(field, {0.2, 1.0}, {0})
                      .at(berry::Kind::LR);
  CHECK(lr.comp[0](0, 0).real() == doctest::Approx(-0.2715403).epsilon(1e-5));
}

TEST_CASE("the four conventional kinds at a model point") {
  // For this family: A^{LR} = A^{RL} = -sinh^2(xi/2) d_lambda and
  // A^{LL} = A^{RR} = +sinh^2(xi/2) d_lambda on the lower band.
  const auto field = model_field();
  const double xi = 1.2;
  const auto conns = berry::conventional_connections(field, {0.4, xi}, {0});
  const double sh2 = std::sinh(0.5 * xi) * std::sinh(0.5 * xi);
  CHECK(std::abs(conns.at(berry::Kind::LR).comp[0](0, 0) - cxd(-sh2, 0)) < 1e-8);
  CHECK(std::abs(conns.at(berry::Kind::RL).comp[0](0, 0) - cxd(-sh2, 0)) < 1e-8);
  CHECK(std::abs(conns.at(berry::Kind::LL).comp[0](0, 0) - cxd(sh2, 0)) < 1e-8);
  CHECK(std::abs(conns.at(berry::Kind::RR).comp[0](0, 0) - cxd(sh2, 0)) < 1e-8);
  // Same-side pairings feel the growth of the unnormalized vectors along xi:
  // i <psi|d_xi psi> = i sinh(xi)/2. Opposite-side pairings stay flat.
  const double sc = 0.5 * std::sinh(xi);
  CHECK(std::abs(conns.at(berry::Kind::LR).comp[1](0, 0)) < 1e-8);
  CHECK(std::abs(conns.at(berry::Kind::RL).comp[1](0, 0)) < 1e-8);
  CHECK(std::abs(conns.at(berry::Kind::LL).comp[1](0, 0) - cxd(0, sc)) < 1e-8);
  CHECK(std::abs(conns.at(berry::Kind::RR).comp[1](0, 0) - cxd(0, sc)) < 1e-8);
}

TEST_CASE("conventional kinds vanish for a constant frame") {
  models::HamiltonianField m;
  m.spec.name = "const";
  m.spec.param_names = {"a", "b"};
  m.spec.dim = 2;
  m.h = [](const Point&) { return models::build_pseudo_hermitian(1, 0, 0, 0); };
  const auto field = FrameField::from_model(m);
  const auto conns = berry::conventional_connections(field, {0.1, 0.2}, {});
  for (const auto& [kind, conn] : conns) {
    (void)kind;
    for (const auto& a : conn.comp) CHECK(a.norm() < 1e-10);
  }
}

TEST_CASE("norm rescaling: LR connection gains +i tanh(xi)/2 in xi") {
  const auto field = model_field();
  const auto primed = field.transformed(norm_factor_transform(field));
  for (double xi : {0.4, 1.0, 1.9}) {
    const auto lr = berry::conventional_connections(primed, {0.8, xi}, {0})
                        .at(berry::Kind::LR);
    CHECK(lr.comp[1](0, 0).imag() ==
          doctest::Approx(0.5 * std::tanh(xi)).epsilon(1e-7));
    CHECK(std::abs(lr.comp[1](0, 0).real()) < 1e-8);
    // lambda component unchanged
    const double sh = std::sinh(0.5 * xi);
    CHECK(std::abs(lr.comp[0](0, 0) - cxd(-sh * sh, 0)) < 1e-8);
  }
}

TEST_CASE("single-band rescaling law for diagonal transforms") {
  // c_n = r_n e^{i phi_n} with smooth parameter dependence; the left-right
  // connection shifts by -d(phi_n) + i d(ln r_n) componentwise.
  const auto field = model_field();
  auto lnr = [](const Point& p, int n) {
    return n == 0 ? 0.3 * std::sin(p[0]) + 0.2 * p[1] : 0.1 * p[1] * p[1];
  };
  auto phi = [](const Point& p, int n) {
    return n == 0 ? 0.7 * p[0] + 0.1 * p[1] * p[1] : -0.4 * p[0];
  };
  auto t_field = [&](const Point& p) {
    cxmat t = cxmat::Zero(2, 2);
    for (int n = 0; n < 2; ++n)
      t(n, n) = std::polar(std::exp(lnr(p, n)), phi(p, n));
    return t;
  };
  const auto primed = field.transformed(t_field);

  const Point p{1.3, 0.9};
  const double h = 1e-5;
  for (int n = 0; n < 2; ++n) {
    const auto base =
        berry::conventional_connections(field, p, {n}).at(berry::Kind::LR);
    const auto resc =
        berry::conventional_connections(primed, p, {n}).at(berry::Kind::LR);
    for (int mu = 0; mu < 2; ++mu) {
      Point qp = p, qm = p;
      qp[mu] += h;
      qm[mu] -= h;
      const double dphi = (phi(qp, n) - phi(qm, n)) / (2 * h);
      const double dlnr = (lnr(qp, n) - lnr(qm, n)) / (2 * h);
      const cxd expect = base.comp[mu](0, 0) - dphi + kI * dlnr;
      CHECK(std::abs(resc.comp[mu](0, 0) - expect) < 1e-7);
    }
  }
}

TEST_CASE("covariant connection vanishes for the model, both bands") {
  const auto field = model_field();
  numeric::Rng rng(77);
  for (int k = 0; k < 10; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)};
    const auto conn = berry::covariant_connection(field, p, {0});
    CHECK(std::abs(conn.comp[0](0, 0)) < 1e-9);
    CHECK(std::abs(conn.comp[1](0, 0)) < 1e-9);
    CHECK(conn.xcheck_residual < 1e-12);

    // Full two-band covariant connection is Hermitian.
    const auto full = berry::covariant_connection(field, p);
    CHECK(full.herm_residual() < 1e-8);
  }
}

TEST_CASE("covariant connection stays zero under the norm rescaling") {
  const auto field = model_field();
  const auto primed = field.transformed(norm_factor_transform(field));
  for (double xi : {0.5, 1.0, 1.6}) {
    const auto conn = berry::covariant_connection(primed, {2.2, xi}, {0});
    CHECK(std::abs(conn.comp[0](0, 0)) < 1e-9);
    CHECK(std::abs(conn.comp[1](0, 0)) < 1e-9);
  }
}

TEST_CASE("distortion tensor: unitary transforms give zero, rescale gives -i tanh/2") {
  const auto field = model_field();

  // Constant unitary: metric unchanged, no distortion.
  const cxmat u = biortho::random_gl(2, 5, 0.0).t;
  const auto primed_u = field.transformed([u](const Point&) { return u; });
  const auto xi_u = berry::distortion_tensor(field, primed_u, {0.3, 0.8});
  CHECK(xi_u.comp[0].norm() < 1e-8);
  CHECK(xi_u.comp[1].norm() < 1e-8);

  const auto primed = field.transformed(norm_factor_transform(field));
  for (double xiv : {0.5, 1.0, 1.8}) {
    const auto xi_t = berry::distortion_tensor(field, primed, {1.0, xiv}, {0});
    CHECK(std::abs(xi_t.comp[1](0, 0) - cxd(0, -0.5 * std::tanh(xiv))) < 1e-8);
    CHECK(std::abs(xi_t.comp[0](0, 0)) < 1e-8);
  }
  // frozen spot value at xi = 1: -(i/2) tanh 1 = -0.380797 i
  const auto xi_t = berry::distortion_tensor(field, primed, {1.0, 1.0}, {0});
  CHECK(xi_t.comp[1](0, 0).imag() == doctest::Approx(-0.3807971).epsilon(1e-5));
}

TEST_CASE("rescaled conventional connection and distortion cancel in Im") {
  const auto field = model_field();
  auto t_field = [](const Point& p) {
    cxmat t = cxmat::Zero(2, 2);
    t(0, 0) = std::exp(0.25 * std::sin(p[0]) + 0.3 * p[1]);
    t(1, 1) = std::exp(-0.2 * std::cos(p[1]));
    return t;
  };
  const auto primed = field.transformed(t_field);
  const Point p{0.9, 1.2};
  for (int n = 0; n < 2; ++n) {
    const auto lr =
        berry::conventional_connections(primed, p, {n}).at(berry::Kind::LR);
    const auto xi_t = berry::distortion_tensor(field, primed, p, {n});
    for (int mu = 0; mu < 2; ++mu)
      CHECK(std::abs(lr.comp[mu](0, 0).imag() + xi_t.comp[mu](0, 0).imag()) <
            1e-7);
  }
}

TEST_CASE("affine law equals the direct primed evaluation") {
  const auto field = model_field();

  SUBCASE("identity transform") {
    auto t_field = [](const Point&) { return cxmat::Identity(2, 2); };
    const auto primed = field.transformed(t_field);
    const auto law =
        berry::affine_transform_checked(field, primed, t_field, {0.7, 1.1});
    CHECK(law.xcheck_residual < 1e-8);
  }

  SUBCASE("norm rescaling keeps the covariant connection at zero") {
    const auto t_field = norm_factor_transform(field);
    const auto primed = field.transformed(t_field);
    const auto law =
        berry::affine_transform_checked(field, primed, t_field, {0.7, 1.1}, {0});
    CHECK(std::abs(law.comp[0](0, 0)) < 1e-7);
    CHECK(std::abs(law.comp[1](0, 0)) < 1e-7);
  }

  SUBCASE("random parameter-dependent GL(2,C)") {
    const cxmat g0 = biortho::random_gl(2, 31, 0.7).t;
    const cxmat g1 = biortho::random_gl(2, 32, 0.3).t;
    const cxmat g2 = biortho::random_gl(2, 33, 0.3).t;
    auto t_field = [=](const Point& p) {
      return cxmat(g0 + std::sin(p[0]) * 0.2 * g1 + 0.15 * p[1] * g2);
    };
    const auto primed = field.transformed(t_field);
    const auto law =
        berry::affine_transform_checked(field, primed, t_field, {1.9, 0.8});
    CHECK(law.xcheck_residual < 1e-6);
    CHECK(law.herm_residual() < 1e-6);  // reality survives the frame change
  }
}

TEST_CASE("covariant connection is Hermitian under random GL(2,C) transforms") {
  const auto field = model_field();
  numeric::Rng rng(404);
  double worst = 0.0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const cxmat t = biortho::random_gl(2, seed, 1.0).t;
    const auto primed = field.transformed([t](const Point&) { return t; });
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)};
    // step 3e-6 balances O(h^2) truncation against roundoff in the
    // metric-connection stencil; the residual floor is then below 1e-8
    const auto conn = berry::covariant_connection(primed, p, {}, 3e-6);
    worst = std::max(worst, conn.herm_residual());
    worst = std::max(worst, std::abs(conn.comp[0](0, 0).imag()));
    worst = std::max(worst, std::abs(conn.comp[1](1, 1).imag()));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("hermitian frame route: constant Hermitized frame, unitarity guard") {
  const auto field = model_field();
  const Point p{2.5, 1.4};
  const cxmat phi = field.hermitian_frame(p);
  CHECK((phi.adjoint() * phi - cxmat::Identity(2, 2)).norm() < 1e-12);
  // column 0 is (1,1)/sqrt2 for any (lambda, xi)
  CHECK(std::abs(phi(0, 0) - cxd(1 / std::sqrt(2.0), 0)) < 1e-12);
  CHECK(std::abs(phi(1, 0) - cxd(1 / std::sqrt(2.0), 0)) < 1e-12);

  const auto conn = berry::hermitian_frame_connection(field, p);
  CHECK(conn.comp[0].norm() < 1e-9);
  CHECK(conn.comp[1].norm() < 1e-9);
}

TEST_CASE("two evaluation routes agree at random points") {
  const auto field = model_field();
  numeric::Rng rng(91);
  for (int k = 0; k < 20; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)};
    const auto a = berry::covariant_connection(field, p);
    const auto b = berry::hermitian_frame_connection(field, p);
    for (int mu = 0; mu < 2; ++mu) CHECK((a.comp[mu] - b.comp[mu]).norm() < 1e-7);
  }
}

TEST_CASE("Hermitian limit: covariant equals conventional when the metric is flat") {
  const auto field = FrameField::from_model(models::make_qwz(1.0));
  const Point p{1.3, 0.4};
  const auto cbc = berry::covariant_connection(field, p);
  const auto lr = berry::conventional_connections(field, p).at(berry::Kind::LR);
  for (int mu = 0; mu < 2; ++mu) CHECK((cbc.comp[mu] - lr.comp[mu]).norm() < 1e-10);
}

TEST_CASE("transition operator: rescale direction with S' = sqrt(cosh xi) S") {
  const auto field = model_field();
  // Unit-normalizing transform (rights scaled down by sqrt(cosh xi)): the
  // metric scales up by cosh(xi) and the map by its square root, so
  // M = sqrt(cosh xi) I.
  auto t_field = [&field](const Point& q) {
    const cxmat t = norm_factor_transform(field)(q);
    return cxmat(t.partialPivLu().inverse());
  };
  const auto primed = field.transformed(t_field);
  const Point p{0.6, 1.0};
  const auto chk = berry::transition_check(field, primed, t_field, p);
  const double root_n = std::sqrt(std::cosh(1.0));
  CHECK((chk.m - root_n * cxmat::Identity(2, 2)).norm() < 1e-9);
  CHECK(chk.s_recon_residual < 1e-9);
  CHECK(chk.gamma_residual < 1e-6);
}

TEST_CASE("transition operator: constant unitary gives a parameter-free M") {
  const auto field = model_field();
  const cxmat u = biortho::random_gl(2, 13, 0.0).t;
  auto t_field = [u](const Point&) { return u; };
  const auto primed = field.transformed(t_field);
  const auto chk = berry::transition_check(field, primed, t_field, {1.2, 0.7});
  CHECK((chk.m.adjoint() * chk.m - cxmat::Identity(2, 2)).norm() < 1e-9);
  CHECK(chk.gamma_residual < 1e-6);  // dM = 0 so Gamma' = Gamma
}

TEST_CASE("transition identity holds for random transform fields") {
  const auto field = model_field();
  const cxmat g0 = biortho::random_gl(2, 61, 0.5).t;
  const cxmat g1 = biortho::random_gl(2, 62, 0.2).t;
  auto t_field = [=](const Point& p) {
    return cxmat(g0 + 0.2 * std::cos(p[0] + p[1]) * g1);
  };
  const auto primed = field.transformed(t_field);
  const auto chk = berry::transition_check(field, primed, t_field, {2.8, 1.5});
  CHECK(chk.s_recon_residual < 1e-9);
  CHECK(chk.gamma_residual < 1e-6);
}

TEST_CASE("band selection bounds are enforced") {
  const auto field = model_field();
  CHECK_THROWS_AS(berry::covariant_connection(field, {0.1, 0.5}, {5}), Error);
}
