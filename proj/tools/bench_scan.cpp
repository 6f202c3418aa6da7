// Timing comparison of the serial reference kernels against the OpenMP
// implementations, over the built-in two-level model and the topology oracle.

#include <omp.h>

#include "nhb/scan.hpp"

#include <chrono>
#include <cstdio>

using namespace nhb;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void row(const char* name, double t_serial, double t_par, int workers) {
  std::printf("%-28s %10.3f s %10.3f s   x%.2f (%d workers)\n", name, t_serial,
              t_par, t_serial / t_par, workers);
}

}  // namespace

int main(int argc, char** argv) {
  const int workers = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  const int n = argc > 2 ? std::atoi(argv[2]) : 81;

  const auto model = models::make_pseudo_hermitian_hyperbolic(1.0, 0.0);
  const auto field = FrameField::from_model(model);
  ParamGrid grid;
  grid.axes = {{"lambda", 0.0, kTwoPi, n, true}, {"xi", 0.1, 2.0, n, false}};

  std::printf("grid %dx%d, %d workers\n\n", n, n, workers);

  {
    scan::ConnectionScanOptions opt;
    opt.kinds = {berry::Kind::CBC, berry::Kind::LR};
    opt.bands = {0};
    std::vector<scan::PointRecord> a, b;
    const double ts = seconds([&] { a = scan::connection_scan_serial(field, grid, opt); });
    const double tp =
        seconds([&] { b = scan::connection_scan(field, grid, opt, workers); });
    row("connection scan", ts, tp, workers);
  }
  {
    scan::CurvatureScanOptions opt;
    opt.kind = berry::Kind::CBC;
    opt.bands = {0};
    std::vector<scan::PointRecord> a, b;
    const double ts = seconds([&] { a = scan::curvature_scan_serial(field, grid, opt); });
    const double tp =
        seconds([&] { b = scan::curvature_scan(field, grid, opt, workers); });
    row("curvature scan", ts, tp, workers);
  }
  {
    std::vector<scan::RealityTrial> trials;
    numeric::Rng rng(2024);
    for (int i = 0; i < 400; ++i)
      trials.push_back({{rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 2.0)},
                        static_cast<uint64_t>(1000 + i), 1.0});
    std::vector<scan::RealityResult> a, b;
    const double ts =
        seconds([&] { a = scan::reality_scan_serial(field, trials, {}, 0.0); });
    const double tp =
        seconds([&] { b = scan::reality_scan(field, trials, {}, 0.0, workers); });
    row("reality trials (400)", ts, tp, workers);
  }
  {
    const auto qwz = models::make_qwz(1.0);
    const auto fq = FrameField::from_model(qwz);
    ParamGrid bz;
    bz.axes = {{"kx", 0.0, kTwoPi, 128, true}, {"ky", 0.0, kTwoPi, 128, true}};
    topology::ChernResult a, b;
    const double ts = seconds(
        [&] { a = topology::chern_link_plaquette(fq, berry::Kind::CBC, {0}, bz); });
    const double tp = seconds([&] {
      b = scan::chern_link_plaquette(fq, berry::Kind::CBC, {0}, bz, workers);
    });
    row("chern link-plaquette 128^2", ts, tp, workers);
    std::printf("  chern agreement: serial %d, parallel %d\n", a.integer, b.integer);
  }
  return 0;
}
