#include <benchmark/benchmark.h>

#include <slabrt/slabrt.hpp>

namespace {

using namespace slabrt;

void BM_FormAssembly(benchmark::State& state) {
  const SpectralGrid g(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    FormAssembler a(DensityProfile::linear_up(), SlabConfig{}, g);
    benchmark::DoNotOptimize(a.assemble(2.0).Gm.data());
  }
}
BENCHMARK(BM_FormAssembly)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Alpha(benchmark::State& state) {
  const SpectralGrid g(static_cast<int>(state.range(0)));
  const ModifiedProblem problem(assemble_forms(DensityProfile::linear_up(), SlabConfig{}, g, 2.0));
  for (auto _ : state) benchmark::DoNotOptimize(problem.alpha(0.4).value);
}
BENCHMARK(BM_Alpha)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GrowthRate(benchmark::State& state) {
  const SpectralGrid g(static_cast<int>(state.range(0)));
  const auto p = DensityProfile::linear_up();
  const ModifiedProblem problem(assemble_forms(p, SlabConfig{}, g, 2.0));
  for (auto _ : state) benchmark::DoNotOptimize(growth_rate(problem, p, SlabConfig{}, g));
}
BENCHMARK(BM_GrowthRate)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Companion(benchmark::State& state) {
  const SpectralGrid g(static_cast<int>(state.range(0)));
  const FormSet f = assemble_forms(DensityProfile::linear_up(), SlabConfig{}, g, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(companion_oracle(f));
}
BENCHMARK(BM_Companion)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ScanBand(benchmark::State& state) {
  const SpectralGrid g(64);
  const int samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_band(DensityProfile::exp(), SlabConfig{}, g, Band{0.0, 10.0}, samples));
  }
}
BENCHMARK(BM_ScanBand)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EvolveStep(benchmark::State& state) {
  const SpectralGrid g(static_cast<int>(state.range(0)));
  const FormSet f = assemble_forms(DensityProfile::linear_up(), SlabConfig{}, g, 2.0);
  const LinearizedEvolver ev(f, SlabConfig{}, 1e-2);
  EvolveState s = random_initial_state(f, g, 1e-2, 1);
  for (auto _ : state) {
    s = ev.step(s);
    benchmark::DoNotOptimize(s.w.data());
  }
}
BENCHMARK(BM_EvolveStep)->Arg(64)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
