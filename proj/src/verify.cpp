#include "nhb/verify.hpp"

#include "nhb/adiabatic.hpp"
#include "nhb/io.hpp"
#include "nhb/scan.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace nhb::verify {

namespace {

const cxd kI(0.0, 1.0);

struct Check {
  int id;
  std::string label;
  std::function<std::pair<bool, std::string>()> body;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

cxmat sigma_x() {
  cxmat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

/// Deterministic per-point seed for gauge-scramble transforms.
uint64_t point_seed(const Point& p, uint64_t seed) {
  uint64_t h = seed ^ 0xcbf29ce484222325ull;
  for (double x : p) {
    uint64_t b;
    std::memcpy(&b, &x, sizeof(b));
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct Env {
  Tolerances tol;
  int workers;
  models::HamiltonianField model;        // two-level family, closed forms attached
  models::HamiltonianField model_num;    // same family, numeric metric route
  FrameField field;
  FrameField field_num;
  FrameField primed;                     // norm-factor rescaled frames

  explicit Env(const Tolerances& t, int w)
      : tol(t),
        workers(w),
        model(models::make_pseudo_hermitian_hyperbolic(1.0, 0.0)),
        model_num(models::make_pseudo_hermitian_hyperbolic(1.0, 0.0)),
        field(FrameField::from_model(model, t)),
        field_num(FrameField::from_model(strip_closed_forms(model_num), t)),
        primed(field.transformed(norm_factor_transform(field))) {}

  static models::HamiltonianField& strip_closed_forms(models::HamiltonianField& m) {
    m.map_s = nullptr;
    m.map_s_derivs.clear();
    return m;
  }

  ParamGrid model_grid(int n_lambda, int n_xi) const {
    ParamGrid g;
    g.axes = {{"lambda", 0.0, kTwoPi, n_lambda, true},
              {"xi", 0.1, 2.0, n_xi, false}};
    return g;
  }
};

std::vector<double> xi_line(int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = 0.1 + (2.0 - 0.1) * i / (n - 1);
  return xs;
}

// --- criterion bodies -------------------------------------------------------

std::pair<bool, std::string> c1_lr_connection(Env& env) {
  double worst_lambda = 0.0, worst_xi = 0.0;
  for (double xi : xi_line(20)) {
    const Point p{0.9, xi};
    const auto conn =
        berry::conventional_connections(env.field, p, {0}).at(berry::Kind::LR);
    const double sh = std::sinh(0.5 * xi);
    worst_lambda =
        std::max(worst_lambda, std::abs(conn.comp[0](0, 0) - cxd(-sh * sh, 0.0)));
    worst_xi = std::max(worst_xi, std::abs(conn.comp[1](0, 0)));
  }
  const bool ok = worst_lambda < 1e-7 && worst_xi < 1e-7;
  return {ok, "max|A_lambda + sinh^2(xi/2)| = " + fmt(worst_lambda) +
                  ", max|A_xi| = " + fmt(worst_xi)};
}

std::pair<bool, std::string> c2_rescaling_law(Env& env) {
  double worst = 0.0;
  for (double xi : xi_line(20)) {
    const Point p{0.9, xi};
    const auto conn =
        berry::conventional_connections(env.primed, p, {0}).at(berry::Kind::LR);
    worst = std::max(worst,
                     std::abs(conn.comp[1](0, 0).imag() - 0.5 * std::tanh(xi)));
  }
  return {worst < 1e-7, "max|Im A'_xi - tanh(xi)/2| = " + fmt(worst)};
}

std::pair<bool, std::string> c3_metric_connection(Env& env) {
  numeric::Rng rng(42);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double xi = rng.uniform(0.1, 2.0);
    const double lambda = rng.uniform(0.0, kTwoPi);
    const auto gam = env.field_num.gamma({lambda, xi});  // generic FD route
    cxmat g_lambda(2, 2), g_xi(2, 2);
    g_lambda << kI, 0, 0, 0;
    g_xi << 0, 0.5 * std::exp(-kI * lambda), 0.5 * std::exp(kI * lambda), 0;
    worst = std::max(worst, (gam.comp[0] - g_lambda).cwiseAbs().maxCoeff());
    worst = std::max(worst, (gam.comp[1] - g_xi).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-7, "max entry deviation = " + fmt(worst)};
}

std::pair<bool, std::string> c4_cbc_vanishes(Env& env) {
  scan::ConnectionScanOptions opt;
  opt.kinds = {berry::Kind::CBC};
  opt.bands = {0};
  const auto recs =
      scan::connection_scan_serial(env.field, env.model_grid(51, 51), opt);
  double worst = 0.0;
  for (const auto& r : recs)
    for (const auto& [k, m] : r.quantities) {
      (void)k;
      worst = std::max(worst, m.cwiseAbs().maxCoeff());
    }
  return {worst < 1e-7, "max|A| over 51x51 grid = " + fmt(worst)};
}

std::pair<bool, std::string> c5_rescale_invariance(Env& env) {
  scan::ConnectionScanOptions opt;
  opt.kinds = {berry::Kind::CBC};
  opt.bands = {0};
  const auto recs =
      scan::connection_scan(env.primed, env.model_grid(51, 51), opt, env.workers);
  double worst_a = 0.0;
  for (const auto& r : recs)
    for (const auto& [k, m] : r.quantities) {
      (void)k;
      worst_a = std::max(worst_a, m.cwiseAbs().maxCoeff());
    }
  double worst_xi = 0.0;
  for (double xi : xi_line(20)) {
    const Point p{1.3, xi};
    const auto xi_t = berry::distortion_tensor(env.field, env.primed, p, {0});
    worst_xi = std::max(
        worst_xi, std::abs(xi_t.comp[1](0, 0) - cxd(0.0, -0.5 * std::tanh(xi))));
  }
  const bool ok = worst_a < 1e-7 && worst_xi < 1e-7;
  return {ok, "max|A'| = " + fmt(worst_a) +
                  ", max|Xi_xi + (i/2)tanh(xi)| = " + fmt(worst_xi)};
}

std::pair<bool, std::string> c6_hermitization(Env& env) {
  // Expected table: H^H = l sigma_x, H'^H = l cosh(xi) sigma_x, and
  // phi_- = (1,1)/sqrt(2) up to a global phase. The first two cannot hold
  // together with the third for any Hermitizing gauge consistent with the
  // metric-connection values checked above (see the verification notes in the
  // README); they are asserted literally and reported as found.
  const double l = 1.0;
  double worst_h = 0.0, worst_hp = 0.0, worst_phi = 0.0;
  std::string measured;
  numeric::Rng rng(7);
  for (int k = 0; k < 5; ++k) {
    const double xi = rng.uniform(0.1, 2.0);
    const double lambda = rng.uniform(0.0, kTwoPi);
    const Point p{lambda, xi};
    const cxmat h = env.model.h(p);
    const cxmat s = env.field.hermitizing(p);
    const cxmat hh =
        metric::hermitize_hamiltonian(h, s, cxmat::Zero(2, 2), env.tol);
    worst_h = std::max(worst_h, (hh - l * sigma_x()).cwiseAbs().maxCoeff());

    const cxmat sp = env.primed.hermitizing(p);
    const cxmat hhp =
        metric::hermitize_hamiltonian(h, sp, cxmat::Zero(2, 2), env.tol);
    worst_hp = std::max(
        worst_hp, (hhp - l * std::cosh(xi) * sigma_x()).cwiseAbs().maxCoeff());

    cxvec phi = env.field.hermitian_frame(p).col(0);
    cxvec target(2);
    target << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const cxd ovl = target.dot(phi);
    const cxd phase = std::abs(ovl) > 0 ? ovl / std::abs(ovl) : cxd(1.0, 0.0);
    worst_phi = std::max(worst_phi, (phi - phase * target).norm());

    if (k == 0) {
      std::ostringstream os;
      os << "H^H(0,0)=" << hh(0, 0).real() << " H^H(0,1)=" << hh(0, 1).real();
      measured = os.str();
    }
  }
  const bool ok = worst_h < 1e-9 && worst_hp < 1e-9 && worst_phi < 1e-9;
  return {ok, "|H^H - l sx| = " + fmt(worst_h) + ", |H'^H - l cosh sx| = " +
                  fmt(worst_hp) + ", |phi - (1,1)/sqrt2| = " + fmt(worst_phi) +
                  " [" + measured + "]"};
}

std::pair<bool, std::string> c7_reality(Env& env) {
  const double scales[3] = {0.5, 1.0, 2.0};
  std::vector<scan::RealityTrial> trials;
  trials.reserve(1000);
  numeric::Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    scan::RealityTrial t;
    t.p = {rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)};
    t.seed = 1000 + i;
    t.log_scale = scales[i % 3];
    trials.push_back(t);
  }
  const auto res = scan::reality_scan(env.field, trials, {}, 0.0, env.workers);
  double worst = 0.0;
  for (const auto& r : res) worst = std::max(worst, r.herm_residual);
  return {worst < 1e-6, "max||A' - A'^dag|| over 1000 GL(2,C) trials = " + fmt(worst)};
}

std::pair<bool, std::string> c8_flatness(Env& env) {
  numeric::Rng rng(99);
  auto s_field = [&](const Point& q) { return env.field_num.metric_data(q).s; };
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.2, 1.9)};
    worst = std::max(worst, metric::flatness_residual(s_field, p, 0, 1, 1e-4));
  }
  return {worst < 1e-5, "max flatness residual = " + fmt(worst)};
}

std::pair<bool, std::string> c9_curvature(Env& env) {
  scan::CurvatureScanOptions opt;
  opt.kind = berry::Kind::CBC;
  opt.bands = {0};
  opt.mu = 1;
  opt.nu = 0;
  opt.h = 1e-4;
  const auto grid = env.model_grid(51, 51);
  const auto recs = scan::curvature_scan(env.field, grid, opt, env.workers);
  double worst_cbc = 0.0;
  for (const auto& r : recs)
    worst_cbc = std::max(worst_cbc, r.quantities[0].second.cwiseAbs().maxCoeff());

  // Conventional left-right curvature against the closed form. The grid value
  // is F_{lambda xi}; the reference table quotes it in the bare-overlap
  // convention (connection without the leading i), i.e. -i * F_{lambda xi}.
  opt.kind = berry::Kind::LR;
  const auto recs_lr = scan::curvature_scan(env.field, grid, opt, env.workers);
  double worst_lr = 0.0;
  for (const auto& r : recs_lr) {
    const double xi = r.p[1];
    const cxd f_bare = -kI * r.quantities[0].second(0, 0);
    worst_lr =
        std::max(worst_lr, std::abs(f_bare - cxd(0.0, -0.5 * std::sinh(xi))));
  }
  const bool ok = worst_cbc < 1e-5 && worst_lr < 1e-5;
  return {ok, "max|F_cbc| = " + fmt(worst_cbc) +
                  ", max|F_lr + (i/2)sinh(xi)| = " + fmt(worst_lr)};
}

std::pair<bool, std::string> c10_holonomy(Env& env) {
  Point base{0.0, 1.0};
  const ParamPath loop = axis_segment(base, 0, 0.0, kTwoPi, 201, true);
  const auto cbc = topology::connection_provider(env.field, berry::Kind::CBC, {0});
  const cxd g_cbc = topology::berry_phase_abelian(cbc, loop);
  const auto lr = topology::connection_provider(env.field, berry::Kind::LR, {0});
  const cxd g_lr = topology::berry_phase_abelian(lr, loop);
  const double sh = std::sinh(0.5);
  const double expect = -kTwoPi * sh * sh;  // -1.706141
  const double d_cbc = std::abs(g_cbc);
  const double d_lr = std::abs(g_lr - cxd(expect, 0.0));
  const bool ok = d_cbc < 1e-6 && d_lr < 1e-6;
  return {ok, "|loop(cbc)| = " + fmt(d_cbc) + ", |loop(lr) - (" +
                  std::to_string(expect) + ")| = " + fmt(d_lr)};
}

std::pair<bool, std::string> c11_chern(Env& env) {
  const auto qwz = models::make_qwz(1.0);
  const auto field = FrameField::from_model(qwz, env.tol);
  ParamGrid grid;
  grid.axes = {{"kx", 0.0, kTwoPi, 64, true}, {"ky", 0.0, kTwoPi, 64, true}};

  const auto plain =
      scan::chern_link_plaquette(field, berry::Kind::CBC, {0}, grid, env.workers);

  // Per-point random diagonal phase scramble; link products cancel it.
  const uint64_t seed = 77;
  auto scramble = [seed](const Point& p) {
    numeric::Rng rng(point_seed(p, seed));
    cxmat t = cxmat::Zero(2, 2);
    for (int n = 0; n < 2; ++n)
      t(n, n) = std::polar(1.0, rng.uniform(0.0, kTwoPi));
    return t;
  };
  const auto scrambled = scan::chern_link_plaquette(
      field.transformed(scramble), berry::Kind::CBC, {0}, grid, env.workers);

  // Smooth scalar rescale (the norm-factor analog with a parameter-dependent
  // scale), probing the distortion-exactness claim. Band-dependent scales
  // would cross the transformed metric's eigenvalues on curves in the zone.
  auto rescale = [](const Point& p) {
    return cxmat(std::exp(0.3 * std::sin(p[0]) + 0.2 * std::cos(p[1])) *
                 cxmat::Identity(2, 2));
  };
  const auto rescaled = scan::chern_link_plaquette(
      field.transformed(rescale), berry::Kind::CBC, {0}, grid, env.workers);

  const bool ok = plain.integer == -1 && std::abs(plain.raw + 1.0) < 1e-3 &&
                  scrambled.integer == -1 && rescaled.integer == -1;
  return {ok, "chern = " + std::to_string(plain.integer) + " (raw " +
                  fmt(plain.raw) + "), scrambled = " +
                  std::to_string(scrambled.integer) + ", rescaled = " +
                  std::to_string(rescaled.integer)};
}

std::pair<bool, std::string> c12_adiabatic(Env& env) {
  const double duration = 500.0;
  const auto schedule = adiabatic::loop_schedule({0.0, 1.0}, 0, 0.0, kTwoPi,
                                                 duration);
  const double dt = adiabatic::default_dt(env.model, schedule, duration);
  const auto f0 = env.field.frame(schedule.point_at(0.0));
  const auto traj =
      adiabatic::evolve(env.model, schedule, f0.r.col(0), duration, dt, 25, env.tol);

  double drift = 0.0;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const auto f = env.field.frame(schedule.point_at(traj.times[k]));
    const cxmat eta = f.l.adjoint() * f.l;
    drift = std::max(drift,
                     std::abs(adiabatic::eta_norm(traj.states[k], eta, env.tol) -
                              1.0));
  }
  const auto phase = adiabatic::geometric_phase(traj, env.field, schedule, 0);
  const double sh = std::sinh(0.5);
  const double raw_dev = std::abs(phase.raw_connection - (-kTwoPi * sh * sh));
  const bool ok = drift < 1e-4 && std::abs(phase.geometric) < 0.02;
  return {ok, "eta-norm drift = " + fmt(drift) + ", geometric phase = " +
                  fmt(phase.geometric) + " (raw holonomy dev " + fmt(raw_dev) +
                  ", fidelity " + fmt(phase.fidelity) + ")"};
}

std::pair<bool, std::string> c13_two_routes(Env& env) {
  numeric::Rng rng(555);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Point p{rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)};
    const auto a = berry::covariant_connection(env.field, p);
    const auto b = berry::hermitian_frame_connection(env.field, p);
    for (int mu = 0; mu < 2; ++mu)
      worst = std::max(worst, (a.comp[mu] - b.comp[mu]).norm());
  }

  // Random 3x3 pseudo-Hermitian families H = Q Lambda Q^-1 with real spectra,
  // smooth in two parameters.
  double worst3 = 0.0;
  for (int k = 0; k < 20; ++k) {
    numeric::Rng gen(9000 + k);
    const cxmat q0 = 2.0 * cxmat::Identity(3, 3) + 0.4 * gen.gaussian_matrix(3, 3);
    const cxmat q1 = 0.3 * gen.gaussian_matrix(3, 3);
    const cxmat q2 = 0.3 * gen.gaussian_matrix(3, 3);
    rvec base(3), da(3), db(3);
    base << -1.0, 0.3, 1.7;
    for (int i = 0; i < 3; ++i) {
      da(i) = 0.2 * gen.gaussian();
      db(i) = 0.2 * gen.gaussian();
    }
    models::HamiltonianField m;
    m.spec.name = "random3";
    m.spec.param_names = {"u", "v"};
    m.spec.dim = 3;
    m.h = [=](const Point& p) {
      const cxmat q = q0 + p[0] * q1 + p[1] * q2;
      rvec lam = base + p[0] * da + p[1] * db;
      cxmat d = cxmat::Zero(3, 3);
      for (int i = 0; i < 3; ++i) d(i, i) = lam(i);
      return cxmat(q * d * q.partialPivLu().inverse());
    };
    const auto f3 = FrameField::from_model(m, env.tol);
    const Point p{gen.uniform(-0.2, 0.2), gen.uniform(-0.2, 0.2)};
    const auto a = berry::covariant_connection(f3, p);
    const auto b = berry::hermitian_frame_connection(f3, p);
    for (int mu = 0; mu < 2; ++mu)
      worst3 = std::max(worst3, (a.comp[mu] - b.comp[mu]).norm());
  }
  const bool ok = worst < 1e-6 && worst3 < 1e-6;
  return {ok, "two-level max dev = " + fmt(worst) +
                  ", 3x3 pseudo-Hermitian max dev = " + fmt(worst3)};
}

}  // namespace

std::vector<CriterionResult> run_all(int workers, const Tolerances& tol) {
  Env env(tol, workers);
  std::vector<Check> checks = {
      {1, "conventional LR connection matches -sinh^2(xi/2) d_lambda", nullptr},
      {2, "rescaled LR connection gains Im A'_xi = tanh(xi)/2", nullptr},
      {3, "metric connection components match the closed forms", nullptr},
      {4, "covariant connection vanishes on the (lambda, xi) grid", nullptr},
      {5, "covariant connection invariant under the norm rescaling", nullptr},
      {6, "Hermitized Hamiltonians and frame vectors match the closed forms",
       nullptr},
      {7, "covariant connection stays Hermitian under random GL(2,C)", nullptr},
      {8, "metric connection is curvature-free (flatness residual)", nullptr},
      {9, "curvatures: covariant zero, conventional matches -(i/2)sinh(xi)",
       nullptr},
      {10, "loop holonomies: covariant 0, conventional -2pi sinh^2(xi/2)",
       nullptr},
      {11, "link-plaquette Chern of the topology oracle is -1 and gauge-stable",
       nullptr},
      {12, "adiabatic loop conserves the eta-norm and accumulates no phase",
       nullptr},
      {13, "covariant and Hermitian-frame routes agree (2x2 and 3x3)", nullptr},
  };
  checks[0].body = [&] { return c1_lr_connection(env); };
  checks[1].body = [&] { return c2_rescaling_law(env); };
  checks[2].body = [&] { return c3_metric_connection(env); };
  checks[3].body = [&] { return c4_cbc_vanishes(env); };
  checks[4].body = [&] { return c5_rescale_invariance(env); };
  checks[5].body = [&] { return c6_hermitization(env); };
  checks[6].body = [&] { return c7_reality(env); };
  checks[7].body = [&] { return c8_flatness(env); };
  checks[8].body = [&] { return c9_curvature(env); };
  checks[9].body = [&] { return c10_holonomy(env); };
  checks[10].body = [&] { return c11_chern(env); };
  checks[11].body = [&] { return c12_adiabatic(env); };
  checks[12].body = [&] { return c13_two_routes(env); };

  std::vector<CriterionResult> results;
  results.reserve(checks.size());
  for (auto& c : checks) {
    CriterionResult r;
    r.id = c.id;
    r.label = c.label;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto [ok, detail] = c.body();
      r.pass = ok;
      r.detail = detail;
    } catch (const Error& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    results.push_back(std::move(r));
  }

  // Stated runtime budgets are part of the contract for a few criteria.
  const std::map<int, double> budgets = {{1, 1.0}, {4, 5.0}, {7, 30.0},
                                         {11, 10.0}, {12, 60.0}};
  for (auto& r : results) {
    auto it = budgets.find(r.id);
    if (it != budgets.end()) {
      if (r.seconds > it->second) {
        r.pass = false;
        r.detail += " [exceeded " + std::to_string(it->second) + " s budget]";
      }
    }
  }
  return results;
}

void print_table(std::ostream& out, const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    out << '[' << std::setw(2) << r.id << "] " << (r.pass ? "PASS" : "FAIL")
        << "  (" << std::fixed << std::setprecision(2) << r.seconds << " s)  "
        << r.label << "\n      " << r.detail << '\n';
  }
  int passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  out << passed << '/' << results.size() << " criteria passed\n";
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace nhb::verify
