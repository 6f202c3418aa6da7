#pragma once

#include "nhb/berry.hpp"

namespace nhb::adiabatic {

/// Time-dependent parameter schedule over [0, duration].
struct Schedule {
  std::function<Point(double)> point_at;
  double duration = 0.0;
};

/// Closed loop in one axis at fixed remaining coordinates. The eased profile
/// (default) starts and ends at rest, which suppresses the sudden-start
/// oscillation a linear ramp imprints on the state.
Schedule loop_schedule(const Point& base, int axis, double from, double to,
                       double duration, bool eased = true);

struct Trajectory {
  std::vector<double> times;    // sampled instants (stride-decimated)
  std::vector<cxvec> states;    // state at each sampled instant
  cxvec psi_final;
  double t_final = 0.0;
  double dt = 0.0;
  double max_step_norm = 0.0;   // max dt*||H|| seen (stability diagnostic)
};

/// Classical RK4 integration of i d/dt psi = H(lambda(t)) psi.
/// Hard-fails with StepTooLarge above dt*||H|| = 0.5 and with Overflow when
/// the state norm exceeds 1e12 (broken-phase blowup guard).
Trajectory evolve(const models::HamiltonianField& field, const Schedule& schedule,
                  const cxvec& psi0, double duration, double dt,
                  int sample_stride = 1, const Tolerances& tol = {});

/// Recommended defaults: duration = 500/min_gap, dt = min(0.01/||H||, T/1e5).
double default_dt(const models::HamiltonianField& field, const Schedule& schedule,
                  double duration);

/// <psi| eta |psi>; asserts the imaginary residue is below 1e-12.
double eta_norm(const cxvec& psi, const cxmat& eta, const Tolerances& tol = {});

/// || d eta/dt - i eta H + i H^dag eta ||_F along the schedule at time t,
/// with d eta/dt from the chain rule through the schedule (central FD in t).
double metric_flow_residual(const std::function<cxmat(const Point&)>& eta_field,
                            const std::function<cxmat(const Point&)>& h_field,
                            const Schedule& schedule, double t, double dt);

struct PhaseResult {
  double geometric = 0.0;        // covariant geometric phase, mod 2pi in (-pi, pi]
  double raw_connection = 0.0;   // left-right phase before the metric correction
  double transport_correction = 0.0;  // loop integral of i<L|Gamma|R> . dl
  double dynamical = 0.0;        // -int E dt
  double fidelity = 0.0;         // |<L_band|psi>| / eta-norm of psi at t = T
  double euclidean_fidelity = 0.0;
};

/// Geometric phase of an adiabatic run: arg of the left-projected final
/// amplitude minus the dynamical phase, plus the metric-transport correction
/// (the loop integral of i<L|Gamma|R>), which makes the extracted value the
/// holonomy of the covariant connection. The uncorrected value is reported in
/// raw_connection. Throws NonAdiabatic below tol.fid_floor fidelity.
PhaseResult geometric_phase(const Trajectory& traj, const FrameField& frames,
                            const Schedule& schedule, int band,
                            int quad_samples = 512);

}  // namespace nhb::adiabatic
