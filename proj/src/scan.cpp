#include "nhb/scan.hpp"

#include <omp.h>

#include <cstdlib>
#include <optional>

namespace nhb::scan {

namespace {

/// First error (by grid index) thrown inside a parallel region, if any.
struct ErrorCollector {
  std::optional<Error> first;
  long first_index = -1;

  void store(long index, const Error& e) {
#pragma omp critical(nhb_scan_error)
    {
      if (first_index < 0 || index < first_index) {
        first_index = index;
        first = e;
      }
    }
  }

  void rethrow() const {
    if (first) throw *first;
  }
};

std::string axis_name(const ParamGrid& grid, int axis) {
  return grid.axes[axis].name;
}

PointRecord connection_record(const FrameField& field, const ParamGrid& grid,
                              const ConnectionScanOptions& opt, long idx) {
  PointRecord rec;
  rec.index = idx;
  rec.p = grid.point(idx);
  for (berry::Kind kind : opt.kinds) {
    berry::ConnectionField conn;
    if (kind == berry::Kind::CBC) {
      conn = berry::covariant_connection(field, rec.p, opt.bands, opt.step);
      rec.diagnostics.emplace_back("cbc.xcheck", conn.xcheck_residual);
      rec.diagnostics.emplace_back("cbc.herm", conn.herm_residual());
    } else if (kind == berry::Kind::HermitianFrame) {
      conn = berry::hermitian_frame_connection(field, rec.p, opt.bands, opt.step);
      rec.diagnostics.emplace_back("hermitian_frame.herm", conn.herm_residual());
    } else {
      conn = berry::conventional_connections(field, rec.p, opt.bands, opt.step)
                 .at(kind);
    }
    for (int mu = 0; mu < field.axes(); ++mu)
      rec.quantities.emplace_back(
          std::string(berry::kind_name(kind)) + "." + axis_name(grid, mu),
          conn.comp[mu]);
  }
  return rec;
}

PointRecord curvature_record(const FrameField& field, const ParamGrid& grid,
                             const CurvatureScanOptions& opt, long idx) {
  PointRecord rec;
  rec.index = idx;
  rec.p = grid.point(idx);
  const cxmat f = topology::curvature_at(field, opt.kind, opt.bands, rec.p, opt.mu,
                                         opt.nu, opt.h);
  rec.quantities.emplace_back("f." + axis_name(grid, opt.nu) +
                                  axis_name(grid, opt.mu),
                              f);
  rec.diagnostics.emplace_back("f.herm", numeric::hermiticity_residual(f));
  return rec;
}

RealityResult reality_trial(const FrameField& field, const RealityTrial& trial,
                            const std::vector<int>& bands, double step) {
  const auto gl = biortho::random_gl(field.dim(), trial.seed, trial.log_scale);
  const cxmat t = gl.t;
  const auto primed = field.transformed([t](const Point&) { return t; });
  const auto conn = berry::covariant_connection(primed, trial.p, bands, step);
  return {conn.herm_residual(), conn.xcheck_residual};
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NHBERRY_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::vector<PointRecord> connection_scan_serial(const FrameField& field,
                                                const ParamGrid& grid,
                                                const ConnectionScanOptions& opt) {
  grid.validate();
  const long n = grid.num_points();
  std::vector<PointRecord> out(n);
  for (long i = 0; i < n; ++i) out[i] = connection_record(field, grid, opt, i);
  return out;
}

std::vector<PointRecord> connection_scan(const FrameField& field,
                                         const ParamGrid& grid,
                                         const ConnectionScanOptions& opt,
                                         int workers) {
  grid.validate();
  const long n = grid.num_points();
  std::vector<PointRecord> out(n);
  ErrorCollector errors;
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = connection_record(field, grid, opt, i);
    } catch (const Error& e) {
      errors.store(i, e);
    }
  }
  errors.rethrow();
  return out;
}

std::vector<PointRecord> curvature_scan_serial(const FrameField& field,
                                               const ParamGrid& grid,
                                               const CurvatureScanOptions& opt) {
  grid.validate();
  const long n = grid.num_points();
  std::vector<PointRecord> out(n);
  for (long i = 0; i < n; ++i) out[i] = curvature_record(field, grid, opt, i);
  return out;
}

std::vector<PointRecord> curvature_scan(const FrameField& field,
                                        const ParamGrid& grid,
                                        const CurvatureScanOptions& opt,
                                        int workers) {
  grid.validate();
  const long n = grid.num_points();
  std::vector<PointRecord> out(n);
  ErrorCollector errors;
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = curvature_record(field, grid, opt, i);
    } catch (const Error& e) {
      errors.store(i, e);
    }
  }
  errors.rethrow();
  return out;
}

std::vector<RealityResult> reality_scan_serial(const FrameField& field,
                                               const std::vector<RealityTrial>& trials,
                                               const std::vector<int>& bands,
                                               double step) {
  std::vector<RealityResult> out(trials.size());
  for (size_t i = 0; i < trials.size(); ++i)
    out[i] = reality_trial(field, trials[i], bands, step);
  return out;
}

std::vector<RealityResult> reality_scan(const FrameField& field,
                                        const std::vector<RealityTrial>& trials,
                                        const std::vector<int>& bands, double step,
                                        int workers) {
  const long n = static_cast<long>(trials.size());
  std::vector<RealityResult> out(n);
  ErrorCollector errors;
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = reality_trial(field, trials[i], bands, step);
    } catch (const Error& e) {
      errors.store(i, e);
    }
  }
  errors.rethrow();
  return out;
}

std::vector<double> plaquette_fluxes(const FrameField& field, berry::Kind kind,
                                     const std::vector<int>& bands,
                                     const ParamGrid& grid, int workers) {
  topology::validate_closed_2d(grid);
  require(kind == berry::Kind::LR || kind == berry::Kind::CBC ||
              kind == berry::Kind::HermitianFrame,
          ErrorKind::ValidationError,
          "link-plaquette invariant defined for lr / cbc / hermitian_frame kinds");
  const auto sel = bands.empty() ? berry::all_bands(field.dim()) : bands;
  const auto& tol = field.tolerances();
  const int n0 = grid.axes[0].size;
  const int n1 = grid.axes[1].size;
  const long n = static_cast<long>(n0) * n1;
  const bool use_phi = (kind != berry::Kind::LR);

  std::vector<cxmat> bra(n), ket(n);
  ErrorCollector errors;
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long idx = 0; idx < n; ++idx) {
    try {
      const int i = static_cast<int>(idx / n1);
      const int j = static_cast<int>(idx % n1);
      const auto f = field.frame(grid.point({i, j}));
      require(biortho::min_eigenvalue_gap(f.energies) > tol.gap_floor,
              ErrorKind::GapClosure, "band gap closes on the Chern grid");
      if (use_phi) {
        const cxmat phi = field.hermitizing(grid.point({i, j})) * f.r;
        bra[idx] = phi.adjoint();
        ket[idx] = phi;
      } else {
        bra[idx] = f.l;
        ket[idx] = f.r;
      }
    } catch (const Error& e) {
      errors.store(idx, e);
    }
  }
  errors.rethrow();

  auto sub = [&sel](const cxmat& m) {
    const int k = static_cast<int>(sel.size());
    cxmat out(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) out(a, b) = m(sel[a], sel[b]);
    return out;
  };
  auto link = [&](int i, int j, int axis) {
    const int ip = axis == 0 ? (i + 1) % n0 : i;
    const int jp = axis == 1 ? (j + 1) % n1 : j;
    const cxd u = sub(bra[static_cast<long>(i) * n1 + j] *
                      ket[static_cast<long>(ip) * n1 + jp])
                      .determinant();
    require(std::abs(u) > 1e-12, ErrorKind::LostContinuity,
            "vanishing link overlap on the Chern grid; refine it");
    return u;
  };

  std::vector<double> flux(n);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long idx = 0; idx < n; ++idx) {
    try {
      const int i = static_cast<int>(idx / n1);
      const int j = static_cast<int>(idx % n1);
      const cxd p = link(i, j, 0) * link((i + 1) % n0, j, 1) /
                    (link(i, (j + 1) % n1, 0) * link(i, j, 1));
      flux[idx] = -std::arg(p);
    } catch (const Error& e) {
      errors.store(idx, e);
    }
  }
  errors.rethrow();
  return flux;
}

topology::ChernResult chern_link_plaquette(const FrameField& field,
                                           berry::Kind kind,
                                           const std::vector<int>& bands,
                                           const ParamGrid& grid, int workers) {
  const auto flux = plaquette_fluxes(field, kind, bands, grid, workers);
  double sum = 0.0;
  for (double f : flux) sum += f;
  return topology::quantize(sum / kTwoPi, field.tolerances().quantize_tol);
}

}  // namespace nhb::scan
