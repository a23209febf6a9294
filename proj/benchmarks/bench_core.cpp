#include <benchmark/benchmark.h>

#include "confinv/energies.hpp"
#include "confinv/geometry.hpp"
#include "confinv/immersion.hpp"
#include "confinv/jet.hpp"
#include "confinv/quadrature.hpp"
#include "confinv/tensor_algebra.hpp"

using namespace confinv;

static void BM_jet_multiply(benchmark::State& state) {
  const Jet x = Jet::variable(4, 2, 0, 0.7);
  const Jet y = Jet::variable(4, 2, 1, -0.3);
  const Jet a = sin(x) + y * y;
  const Jet b = exp(0.2 * y) - x;
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_jet_multiply);

static void BM_frame_surface(benchmark::State& state) {
  const Immersion f = torus(2.0, 1.0);
  const AmbientMetric amb = AmbientMetric::flat_space(3);
  Eigen::VectorXd u(2);
  u << 0.7, 1.9;
  for (auto _ : state) benchmark::DoNotOptimize(frame_at(f, amb, u));
}
BENCHMARK(BM_frame_surface);

static void BM_frame_hypersurface4(benchmark::State& state) {
  const Immersion f = sphere(4, 1.0);
  const AmbientMetric amb = AmbientMetric::flat_space(5);
  Eigen::VectorXd u(4);
  u << 0.9, 1.3, 2.0, 0.6;
  for (auto _ : state) benchmark::DoNotOptimize(frame_at(f, amb, u));
}
BENCHMARK(BM_frame_hypersurface4);

static void BM_evaluate_density(benchmark::State& state) {
  const AmbientMetric amb = AmbientMetric::flat_space(4);
  Eigen::VectorXd u(2);
  u << 0.4, 1.1;
  const PointFrame fr = frame_at(clifford_torus(1.0), amb, u);
  const ContractionSum P = named_sum("conformal_willmore", 2);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_sum(P, fr));
}
BENCHMARK(BM_evaluate_density);

static void BM_willmore_torus(benchmark::State& state) {
  const Immersion f = torus(2.0, 1.0);
  const AmbientMetric amb = AmbientMetric::flat_space(3);
  const QuadratureGrid grid = build_grid(f.domain, {16, 16});
  for (auto _ : state) benchmark::DoNotOptimize(willmore(f, amb, grid).value);
}
BENCHMARK(BM_willmore_torus);

BENCHMARK_MAIN();
