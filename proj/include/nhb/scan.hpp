#pragma once

#include "nhb/topology.hpp"

namespace nhb::scan {

/// One grid point's worth of computed quantities. Quantity keys are
/// "<kind>.<axis>" for connections and "f.<axis_nu><axis_mu>" for curvature.
struct PointRecord {
  long index = 0;
  Point p;
  std::vector<std::pair<std::string, cxmat>> quantities;
  std::vector<std::pair<std::string, double>> diagnostics;
};

struct ConnectionScanOptions {
  std::vector<berry::Kind> kinds{berry::Kind::CBC};
  std::vector<int> bands{};  // empty = all
  double step = 0.0;         // 0 = field default
};

/// Serial reference implementation; kept bit-identical to the parallel path.
std::vector<PointRecord> connection_scan_serial(const FrameField& field,
                                                const ParamGrid& grid,
                                                const ConnectionScanOptions& opt);

/// OpenMP grid scan; records land in grid order regardless of thread timing.
std::vector<PointRecord> connection_scan(const FrameField& field,
                                         const ParamGrid& grid,
                                         const ConnectionScanOptions& opt,
                                         int workers);

struct CurvatureScanOptions {
  berry::Kind kind = berry::Kind::CBC;
  std::vector<int> bands{};
  int mu = 1;
  int nu = 0;
  double h = 1e-4;
};

std::vector<PointRecord> curvature_scan_serial(const FrameField& field,
                                               const ParamGrid& grid,
                                               const CurvatureScanOptions& opt);

std::vector<PointRecord> curvature_scan(const FrameField& field,
                                        const ParamGrid& grid,
                                        const CurvatureScanOptions& opt,
                                        int workers);

struct RealityTrial {
  Point p;
  uint64_t seed = 0;
  double log_scale = 1.0;
};

struct RealityResult {
  double herm_residual = 0.0;
  double xcheck_residual = 0.0;
};

/// Covariant-connection reality check under seeded GL(N,C) frame changes.
std::vector<RealityResult> reality_scan_serial(const FrameField& field,
                                               const std::vector<RealityTrial>& trials,
                                               const std::vector<int>& bands = {},
                                               double step = 0.0);

std::vector<RealityResult> reality_scan(const FrameField& field,
                                        const std::vector<RealityTrial>& trials,
                                        const std::vector<int>& bands, double step,
                                        int workers);

/// OpenMP twin of topology::plaquette_fluxes (same values, parallel frames).
std::vector<double> plaquette_fluxes(const FrameField& field, berry::Kind kind,
                                     const std::vector<int>& bands,
                                     const ParamGrid& grid, int workers);

/// Link-plaquette Chern number with parallel flux evaluation; the flux array
/// is reduced serially in index order, so results do not depend on workers.
topology::ChernResult chern_link_plaquette(const FrameField& field,
                                           berry::Kind kind,
                                           const std::vector<int>& bands,
                                           const ParamGrid& grid, int workers);

/// Resolve a worker count: explicit > 0 wins, else NHBERRY_WORKERS, else 1.
int resolve_workers(int requested);

}  // namespace nhb::scan
