#include "nhb/run.hpp"

#include "nhb/adiabatic.hpp"
#include "nhb/io.hpp"
#include "nhb/scan.hpp"
#include "nhb/verify.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace nhb::run {

namespace {

using config::Command;
using config::RunConfig;

models::HamiltonianField load_model(const RunConfig& cfg) {
  if (!cfg.model.file.empty())
    return io::external_model(io::read_nhgrid_file(cfg.model.file));
  return models::make_builtin(cfg.model.name, cfg.model.params);
}

FrameField apply_transform(const RunConfig& cfg, const FrameField& base) {
  switch (cfg.transform.type) {
    case config::TransformType::None:
      return base;
    case config::TransformType::DiagonalRescale:
      return base.transformed(norm_factor_transform(base));
    case config::TransformType::RandomGl: {
      const cxmat t =
          biortho::random_gl(base.dim(), cfg.transform.seed, cfg.transform.log_scale)
              .t;
      return base.transformed([t](const Point&) { return t; });
    }
  }
  return base;
}

ParamPath build_path(const RunConfig& cfg, const models::ModelSpec& spec) {
  const auto& ps = *cfg.path;
  Point base(spec.param_names.size(), 0.0);
  for (size_t k = 0; k < spec.param_names.size(); ++k) {
    auto it = ps.fixed.find(spec.param_names[k]);
    if (it != ps.fixed.end()) base[k] = it->second;
  }
  const int axis = spec.axis_index(ps.axis);
  return axis_segment(base, axis, ps.from, ps.to, ps.points, ps.closed);
}

std::vector<io::OutputRecord> point_records_to_output(
    const std::vector<scan::PointRecord>& recs) {
  std::vector<io::OutputRecord> out;
  out.reserve(recs.size());
  for (const auto& r : recs) {
    io::OutputRecord o;
    o.p = r.p;
    o.matrices = r.quantities;
    for (const auto& [k, v] : r.diagnostics) o.reals.emplace_back(k, v);
    out.push_back(std::move(o));
  }
  return out;
}

void emit(const RunConfig& cfg, const std::vector<std::string>& axis_names,
          const std::vector<io::OutputRecord>& records, std::ostream& log) {
  const std::string hash = config::config_hash(cfg);
  auto write = [&](std::ostream& os) {
    if (cfg.output.format == config::OutputFormat::Json)
      io::write_records_json(os, hash, axis_names, records);
    else
      io::write_records_csv(os, axis_names, records);
  };
  if (cfg.output.path.empty()) {
    write(log);
  } else {
    std::ofstream f(cfg.output.path);
    require(f.good(), ErrorKind::FormatError,
            "cannot write output file '" + cfg.output.path + "'");
    write(f);
    log << "wrote " << records.size() << " record(s) to " << cfg.output.path
        << " [config " << hash << "]\n";
  }
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& log, bool verbose) {
  const int workers = scan::resolve_workers(cfg.workers);

  if (cfg.command == Command::Verify) {
    const auto results = verify::run_all(workers, cfg.tol);
    verify::print_table(log, results);
    if (!cfg.output.path.empty()) {
      std::vector<io::OutputRecord> recs;
      for (const auto& r : results) {
        io::OutputRecord o;
        o.reals.emplace_back("id", r.id);
        o.reals.emplace_back("pass", r.pass ? 1.0 : 0.0);
        o.reals.emplace_back("seconds", r.seconds);
        o.texts.emplace_back("label", r.label);
        o.texts.emplace_back("detail", r.detail);
        recs.push_back(std::move(o));
      }
      emit(cfg, {}, recs, log);
    }
    return verify::all_pass(results) ? 0 : 1;
  }

  const auto model = load_model(cfg);
  const auto base = FrameField::from_model(model, cfg.tol);
  const auto field = apply_transform(cfg, base);
  const auto axis_names = model.spec.param_names;

  // Band bounds for file-backed models are only checkable here.
  for (int b : cfg.bands)
    require(b >= 0 && b < model.spec.dim, ErrorKind::ValidationError,
            "band index " + std::to_string(b) + " out of range");
  if (cfg.grid && !cfg.model.file.empty()) {
    require(cfg.grid->rank() == model.n_axes(), ErrorKind::ValidationError,
            "grid rank does not match the file model");
    for (int k = 0; k < cfg.grid->rank(); ++k)
      require(cfg.grid->axes[k].name == model.spec.param_names[k],
              ErrorKind::ValidationError,
              "grid axis '" + cfg.grid->axes[k].name + "' does not match file axis");
  }

  switch (cfg.command) {
    case Command::Connection: {
      scan::ConnectionScanOptions opt;
      opt.kinds = cfg.kinds;
      opt.bands = cfg.bands;
      opt.step = 0.0;
      const auto recs = scan::connection_scan(field, *cfg.grid, opt, workers);
      emit(cfg, axis_names, point_records_to_output(recs), log);
      if (verbose) log << "connection scan: " << recs.size() << " points\n";
      return 0;
    }
    case Command::Curvature: {
      require(cfg.grid->rank() == 2, ErrorKind::ValidationError,
              "curvature scans need a 2D grid");
      scan::CurvatureScanOptions opt;
      opt.kind = cfg.kinds.front();
      opt.bands = cfg.bands;
      opt.mu = 1;
      opt.nu = 0;
      const auto recs = scan::curvature_scan(field, *cfg.grid, opt, workers);
      emit(cfg, axis_names, point_records_to_output(recs), log);
      return 0;
    }
    case Command::Chern: {
      topology::ChernResult res;
      const berry::Kind kind = cfg.kinds.front();
      if (cfg.chern.method == "curvature_sum")
        res = topology::chern_curvature_sum(field, kind, cfg.bands, *cfg.grid);
      else
        res = scan::chern_link_plaquette(field, kind, cfg.bands, *cfg.grid, workers);
      io::OutputRecord o;
      o.reals.emplace_back("chern", res.integer);
      o.reals.emplace_back("raw", res.raw);
      o.reals.emplace_back("quality", res.quality);
      o.texts.emplace_back("method", cfg.chern.method);
      o.texts.emplace_back("kind", berry::kind_name(kind));
      emit(cfg, {}, {o}, log);
      log << "chern = " << res.integer << " (raw " << res.raw << ")\n";
      return 0;
    }
    case Command::Holonomy: {
      const ParamPath path = build_path(cfg, model.spec);
      const berry::Kind kind = cfg.kinds.front();
      const auto provider = topology::connection_provider(field, kind, cfg.bands);
      io::OutputRecord o;
      const std::vector<int> sel =
          cfg.bands.empty() ? berry::all_bands(model.spec.dim) : cfg.bands;
      if (sel.size() == 1) {
        const cxd gamma = topology::berry_phase_abelian(provider, path);
        o.complexes.emplace_back("phase", gamma);
      } else {
        const cxmat w = topology::wilson_loop(provider, path);
        o.matrices.emplace_back("wilson_loop", w);
        Eigen::ComplexEigenSolver<cxmat> es(w, false);
        for (int k = 0; k < es.eigenvalues().size(); ++k)
          o.complexes.emplace_back("eigenphase." + std::to_string(k),
                                   std::log(es.eigenvalues()(k)) / cxd(0.0, 1.0));
      }
      o.texts.emplace_back("kind", berry::kind_name(kind));
      emit(cfg, {}, {o}, log);
      return 0;
    }
    case Command::Adiabatic: {
      const ParamPath path = build_path(cfg, model.spec);
      const int axis = model.spec.axis_index(cfg.path->axis);
      const auto schedule = adiabatic::loop_schedule(
          path.pts.front(), axis, cfg.path->from, cfg.path->to,
          cfg.adiabatic.duration);
      const double dt = cfg.adiabatic.dt > 0.0
                            ? cfg.adiabatic.dt
                            : adiabatic::default_dt(model, schedule,
                                                    cfg.adiabatic.duration);
      const auto f0 = field.frame(schedule.point_at(0.0));
      const cxvec psi0 = f0.r.col(cfg.adiabatic.band);
      const auto traj = adiabatic::evolve(model, schedule, psi0,
                                          cfg.adiabatic.duration, dt, 25, cfg.tol);

      double drift = 0.0;
      const auto eta0 = field.metric_at(schedule.point_at(0.0));
      const double n0 = adiabatic::eta_norm(traj.states.front(), eta0, cfg.tol);
      for (size_t k = 0; k < traj.states.size(); ++k) {
        const auto eta = field.metric_at(schedule.point_at(traj.times[k]));
        drift = std::max(drift, std::abs(adiabatic::eta_norm(traj.states[k], eta,
                                                             cfg.tol) -
                                         n0));
      }
      const auto phase = adiabatic::geometric_phase(traj, field, schedule,
                                                    cfg.adiabatic.band);
      io::OutputRecord o;
      o.reals.emplace_back("geometric_phase", phase.geometric);
      o.reals.emplace_back("raw_connection_phase", phase.raw_connection);
      o.reals.emplace_back("transport_correction", phase.transport_correction);
      o.reals.emplace_back("dynamical_phase", phase.dynamical);
      o.reals.emplace_back("fidelity", phase.fidelity);
      o.reals.emplace_back("eta_norm_drift", drift);
      o.reals.emplace_back("dt", traj.dt);
      emit(cfg, {}, {o}, log);
      return 0;
    }
    case Command::Verify:
      break;  // handled above
  }
  return 0;
}

}  // namespace nhb::run
