#include "nhb/adiabatic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace nhb::adiabatic {

namespace {

const cxd kI(0.0, 1.0);

double wrap_phase(double x) {
  x = std::fmod(x + kPi, kTwoPi);
  if (x <= 0.0) x += kTwoPi;
  return x - kPi;
}

}  // namespace

namespace {

// Trapezoidal pacing: sin^2 velocity ramps over the first and last eps of the
// schedule, uniform rate in between. Starting and ending at rest suppresses
// the sudden-start oscillation, while the nearly uniform mid-section keeps
// the peak rate (and the lambda_dot^2 following error) close to the mean.
double eased_fraction(double u, double eps) {
  u = std::clamp(u, 0.0, 1.0);
  if (u > 0.5) return 1.0 - eased_fraction(1.0 - u, eps);
  double accum;
  if (u <= eps)
    accum = 0.5 * u - (eps / (2.0 * kPi)) * std::sin(kPi * u / eps);
  else
    accum = 0.5 * eps + (u - eps);
  return accum / (1.0 - eps);
}

}  // namespace

Schedule loop_schedule(const Point& base, int axis, double from, double to,
                       double duration, bool eased) {
  Schedule s;
  s.duration = duration;
  s.point_at = [base, axis, from, to, duration, eased](double t) {
    const double u = t / duration;
    const double frac = eased ? eased_fraction(u, 0.15) : std::clamp(u, 0.0, 1.0);
    Point p = base;
    p[axis] = from + (to - from) * frac;
    return p;
  };
  return s;
}

double default_dt(const models::HamiltonianField& field, const Schedule& schedule,
                  double duration) {
  double hmax = 0.0;
  const int probes = 32;
  for (int k = 0; k <= probes; ++k)
    hmax = std::max(hmax,
                    field.h(schedule.point_at(duration * k / probes)).norm());
  require(hmax > 0.0, ErrorKind::EvaluationFailure, "vanishing Hamiltonian norm");
  return std::min(0.01 / hmax, duration / 1e5);
}

Trajectory evolve(const models::HamiltonianField& field, const Schedule& schedule,
                  const cxvec& psi0, double duration, double dt,
                  int sample_stride, const Tolerances&) {
  require(psi0.norm() > 0.0, ErrorKind::ValidationError, "initial state is zero");
  require(dt > 0.0 && duration > 0.0, ErrorKind::ValidationError,
          "need positive duration and dt");

  const long steps = std::lround(duration / dt);
  const double h = duration / static_cast<double>(steps);

  auto rhs = [&field, &schedule](double t, const cxvec& psi) -> cxvec {
    return -kI * (field.h(schedule.point_at(t)) * psi);
  };

  Trajectory traj;
  traj.dt = h;
  const long stride = std::max<long>(sample_stride, 1 + steps / 200000);
  traj.times.reserve(steps / stride + 2);
  traj.states.reserve(steps / stride + 2);

  cxvec psi = psi0;
  traj.times.push_back(0.0);
  traj.states.push_back(psi);

  for (long s = 0; s < steps; ++s) {
    const double t = s * h;
    const cxmat hm = field.h(schedule.point_at(t));
    const double step_norm = h * hm.norm();
    traj.max_step_norm = std::max(traj.max_step_norm, step_norm);
    require(step_norm <= 0.5, ErrorKind::StepTooLarge,
            "dt*||H|| = " + std::to_string(step_norm) + " exceeds 0.5");

    const cxvec k1 = rhs(t, psi);
    const cxvec k2 = rhs(t + 0.5 * h, psi + 0.5 * h * k1);
    const cxvec k3 = rhs(t + 0.5 * h, psi + 0.5 * h * k2);
    const cxvec k4 = rhs(t + h, psi + h * k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    require(psi.norm() < 1e12, ErrorKind::Overflow,
            "state norm exceeded 1e12 (broken-phase blowup)");
    if ((s + 1) % stride == 0) {
      traj.times.push_back((s + 1) * h);
      traj.states.push_back(psi);
    }
  }
  if (traj.times.back() != duration) {
    traj.times.push_back(duration);
    traj.states.push_back(psi);
  }
  traj.psi_final = psi;
  traj.t_final = duration;
  return traj;
}

double eta_norm(const cxvec& psi, const cxmat& eta, const Tolerances& tol) {
  require(numeric::is_hermitian(eta, tol.tol_herm), ErrorKind::NotPositiveDefinite,
          "metric is not Hermitian");
  Eigen::SelfAdjointEigenSolver<cxmat> es(eta, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() > tol.posdef_floor,
          ErrorKind::NotPositiveDefinite, "metric is not positive-definite");
  const cxd v = psi.dot(eta * psi);  // Eigen dot conjugates the left argument
  require(std::abs(v.imag()) < 1e-12 * std::max(1.0, std::abs(v.real())),
          ErrorKind::NotPositiveDefinite,
          "eta-norm has imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

double metric_flow_residual(const std::function<cxmat(const Point&)>& eta_field,
                            const std::function<cxmat(const Point&)>& h_field,
                            const Schedule& schedule, double t, double dt) {
  const cxmat eta_p = eta_field(schedule.point_at(t + dt));
  const cxmat eta_m = eta_field(schedule.point_at(t - dt));
  const cxmat deta = (eta_p - eta_m) / (2.0 * dt);
  const Point p = schedule.point_at(t);
  const cxmat eta = eta_field(p);
  const cxmat hm = h_field(p);
  return (deta - kI * eta * hm + kI * hm.adjoint() * eta).norm();
}

PhaseResult geometric_phase(const Trajectory& traj, const FrameField& frames,
                            const Schedule& schedule, int band,
                            int quad_samples) {
  const auto& tol = frames.tolerances();
  const double duration = traj.t_final;

  const Point p_end = schedule.point_at(duration);
  const auto f_end = frames.frame(p_end);
  const cxd amp = (f_end.l.row(band) * traj.psi_final)(0, 0);

  PhaseResult res;
  const cxmat eta_end = f_end.l.adjoint() * f_end.l;
  const double enorm = std::sqrt(eta_norm(traj.psi_final, eta_end, tol));
  res.fidelity = std::abs(amp) / enorm;
  const cxvec r_band = f_end.r.col(band);
  res.euclidean_fidelity = std::abs(r_band.dot(traj.psi_final)) /
                           (r_band.norm() * traj.psi_final.norm());
  require(res.fidelity >= tol.fid_floor, ErrorKind::NonAdiabatic,
          "band fidelity " + std::to_string(res.fidelity) +
              " below fid_floor; slow the schedule");

  const Point p_start = schedule.point_at(0.0);
  const auto f_start = frames.frame(p_start);
  const cxd amp0 = (f_start.l.row(band) * traj.states.front())(0, 0);

  // Dynamical phase -int E dt and the metric-transport line integral, both by
  // trapezoidal quadrature over the schedule.
  double dyn = 0.0;
  double corr = 0.0;
  double e_prev = 0.0;
  std::vector<double> g_prev(frames.axes(), 0.0);
  Point prev_pt;
  for (int k = 0; k <= quad_samples; ++k) {
    const double t = duration * k / quad_samples;
    const Point p = schedule.point_at(t);
    const auto f = frames.frame(p);
    const double e = f.energies(band).real();
    const auto gam = frames.gamma(p);
    std::vector<double> g_here(frames.axes());
    for (int mu = 0; mu < frames.axes(); ++mu)
      g_here[mu] =
          (kI * (f.l.row(band) * gam.comp[mu] * f.r.col(band))(0, 0)).real();
    if (k > 0) {
      dyn += 0.5 * (e_prev + e) * (duration / quad_samples);
      for (int mu = 0; mu < frames.axes(); ++mu)
        corr += 0.5 * (g_prev[mu] + g_here[mu]) * (p[mu] - prev_pt[mu]);
    }
    e_prev = e;
    g_prev = g_here;
    prev_pt = p;
  }
  res.dynamical = -dyn;
  res.transport_correction = corr;

  const double total = std::arg(amp) - std::arg(amp0);
  res.raw_connection = wrap_phase(total - res.dynamical);
  res.geometric = wrap_phase(total - res.dynamical + corr);
  return res;
}

}  // namespace nhb::adiabatic
