/**
 * @file bench_models.cpp
 * @brief Evaluation and training-step cost of the gravity models.
 */
#include <benchmark/benchmark.h>

#include <memory>

#include "pinngm/analytic/heterogeneous.hpp"
#include "pinngm/analytic/polyhedral.hpp"
#include "pinngm/analytic/spherical_harmonics.hpp"
#include "pinngm/common/log.hpp"
#include "pinngm/geometry/mesh_builders.hpp"
#include "pinngm/geometry/sampling.hpp"
#include "pinngm/pinn/factory.hpp"
#include "pinngm/regress/rls.hpp"

using namespace pinngm;

namespace {

constexpr double kMu = 4.463e5;

std::shared_ptr<const geometry::ShapeModel> asteroid(int subdivisions) {
  return std::make_shared<const geometry::ShapeModel>(geometry::make_eros_like(subdivisions));
}

void BM_PolyhedralAcceleration(benchmark::State& state) {
  const auto shape = asteroid(static_cast<int>(state.range(0)));
  const analytic::PolyhedralModel poly(shape, kMu);
  const auto pts = geometry::sample_shell(shape->radius(), 1.5, 10.0, 256, 1);
  for (auto _ : state) benchmark::DoNotOptimize(poly.accelerations(pts));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size()));
  state.counters["facets"] = static_cast<double>(shape->facet_count());
}
BENCHMARK(BM_PolyhedralAcceleration)->Arg(2)->Arg(3);

void BM_SphericalHarmonics(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  analytic::SphericalHarmonicModel sh(kMu, 16000.0, degree);
  for (int l = 2; l <= degree; ++l) sh.set_C(l, 0, 1e-3 / l);
  const auto pts = geometry::sample_shell(16000.0, 1.0, 10.0, 256, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sh.accelerations(pts));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size()));
}
BENCHMARK(BM_SphericalHarmonics)->Arg(4)->Arg(15)->Arg(32);

pinn::PinnModel make_model(int depth, int width, double R) {
  pinn::PinnSpec spec;
  spec.depth = depth;
  spec.width = width;
  const auto pts = geometry::sample_shell(R, 0.5, 10.0, 64, 3);
  return pinn::make_pinn(spec, pts, std::nullopt, kMu, R);
}

void BM_PinnAcceleration(benchmark::State& state) {
  const double R = 16000.0;
  const auto m = make_model(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), R);
  const auto pts = geometry::sample_shell(R, 0.0, 10.0, 1024, 4);
  for (auto _ : state) benchmark::DoNotOptimize(m.accelerations(pts));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size()));
  state.counters["params"] = static_cast<double>(m.parameter_count());
}
BENCHMARK(BM_PinnAcceleration)->Args({2, 8})->Args({6, 32})->Args({8, 64});

void BM_PinnLossGradient(benchmark::State& state) {
  const double R = 16000.0;
  const auto m = make_model(6, 32, R);
  const auto n = static_cast<int>(state.range(0));
  const auto pts = geometry::sample_shell(R, 0.0, 10.0, n, 5);
  network::Mat3X x(3, n), a(3, n);
  for (int i = 0; i < n; ++i) {
    x.col(i) = pts[i] / R;
    a.col(i) = -x.col(i) / std::pow(x.col(i).norm(), 3);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.loss_and_gradient(x, a, network::LossKind::kRmsPercent));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PinnLossGradient)->Arg(256)->Arg(2048);

void BM_RlsStream(benchmark::State& state) {
  const auto cols = state.range(0);
  MatX H = MatX::Random(3000, cols);
  MatX y = MatX::Random(3000, 1);
  const MatX Gamma = MatX::Identity(cols, cols) * 1e-6;
  for (auto _ : state) benchmark::DoNotOptimize(regress::rls_stream(H, y, Gamma, 300));
}
BENCHMARK(BM_RlsStream)->Arg(25)->Arg(256);

}  // namespace
BENCHMARK_MAIN();
