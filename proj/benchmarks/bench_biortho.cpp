#include <benchmark/benchmark.h>

#include "biortho/biorthogonal.hpp"
#include "biortho/conformal.hpp"
#include "biortho/equilibrium.hpp"
#include "biortho/sampler.hpp"

namespace {

using namespace biortho;

PrecisionContext bits(int b) {
  PrecisionContext ctx;
  ctx.mantissa_bits = static_cast<unsigned>(b);
  return ctx;
}

void BM_BimomentTableQuadrature(benchmark::State& state) {
  const auto ctx = bits(256);
  PrecisionGuard guard(ctx);
  const Weight w{0.0, 1, Potential::quadratic(1, 0)};
  for (auto _ : state) {
    BimomentTable t(w, Theta::parse("3/2"), static_cast<int>(state.range(0)), ctx);
    benchmark::DoNotOptimize(t(0, 0));
  }
}
BENCHMARK(BM_BimomentTableQuadrature)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BuildSystem(benchmark::State& state) {
  const auto ctx = bits(static_cast<int>(state.range(1)));
  PrecisionGuard guard(ctx);
  for (auto _ : state) {
    auto sys = build_system(Weight::laguerre(), Theta::parse("2"), static_cast<int>(state.range(0)), ctx);
    benchmark::DoNotOptimize(sys.kappa().back());
  }
}
BENCHMARK(BM_BuildSystem)->Args({10, 256})->Args({30, 256})->Args({30, 512})->Unit(benchmark::kMillisecond);

void BM_VerifyOrthogonality(benchmark::State& state) {
  const auto ctx = bits(256);
  PrecisionGuard guard(ctx);
  auto sys = build_system(Weight::laguerre(), Theta::parse("2"), 10, ctx);
  for (auto _ : state) benchmark::DoNotOptimize(verify_orthogonality(sys));
}
BENCHMARK(BM_VerifyOrthogonality)->Unit(benchmark::kMillisecond);

void BM_TraceCurve(benchmark::State& state) {
  const auto m = ConformalMap::hard(2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(trace_curve(m, static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_TraceCurve)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_SolveC(benchmark::State& state) {
  const auto v = Potential::quadratic(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_c(v, 2.5));
}
BENCHMARK(BM_SolveC)->Unit(benchmark::kMicrosecond);

void BM_DensityPoint(benchmark::State& state) {
  const auto v = Potential::linear(1);
  const double c = solve_c(v, 2);
  const auto curve = trace_curve(ConformalMap::hard(2, c), 512);
  for (auto _ : state) benchmark::DoNotOptimize(density_hard(v, 2, c, curve, 1.3));
}
BENCHMARK(BM_DensityPoint)->Unit(benchmark::kMicrosecond);

void BM_ClassifyEdge(benchmark::State& state) {
  const auto v = Potential::quadratic(1, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_edge(v, 2).right);
}
BENCHMARK(BM_ClassifyEdge)->Arg(0)->Arg(-3)->Unit(benchmark::kMillisecond);

void BM_MetropolisSweeps(benchmark::State& state) {
  EnsembleConfig cfg;
  cfg.n_particles = static_cast<int>(state.range(0));
  cfg.weight = Weight{0.0, cfg.n_particles, Potential::linear(1)};
  for (auto _ : state) benchmark::DoNotOptimize(run_chain(cfg, 1000, 100, 10).acceptance_rate);
  state.SetItemsProcessed(state.iterations() * 1000 * state.range(0));
}
BENCHMARK(BM_MetropolisSweeps)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
