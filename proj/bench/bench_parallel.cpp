// Serial reference loops against their OpenMP versions.
#include <benchmark/benchmark.h>

#include "sdq/analyzer.hpp"
#include "sdq/diffusion.hpp"
#include "sdq/replicate.hpp"

using namespace sdq;

namespace {

const SpeedProfile kProfile({1.0}, {{1.0, 1.0, 0.0, 1.0}, {2.0, 2.0, 0.0, 2.0}});

ScaledSystem system100() {
  return ScaledSystem(100, kProfile, make_renewal(RenewalKind::Exponential), make_renewal(RenewalKind::Exponential));
}

RunOptions run_options() {
  RunOptions opt;
  opt.events = 500000;
  opt.seed = 1;
  return opt;
}

DiffusionConfig diffusion_config() {
  DiffusionConfig cfg;
  cfg.coeffs = constant_coefficients(-1.0, 2.0);
  cfg.dt = 1e-3;
  cfg.steps = 500000;
  cfg.bin_width = 0.01;
  return cfg;
}

void BM_ReplicationsSerial(benchmark::State& state) {
  const ScaledSystem sys = system100();
  for (auto _ : state)
    benchmark::DoNotOptimize(run_replications_serial(sys, run_options(), static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0) * run_options().events);
}

void BM_ReplicationsParallel(benchmark::State& state) {
  const ScaledSystem sys = system100();
  for (auto _ : state)
    benchmark::DoNotOptimize(run_replications(sys, run_options(), static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0) * run_options().events);
}

void BM_DiffusionSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_rbm_paths_serial(diffusion_config(), static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0) * diffusion_config().steps);
}

void BM_DiffusionParallel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_rbm_paths(diffusion_config(), static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0) * diffusion_config().steps);
}

void BM_StudySerial(benchmark::State& state) {
  const RenewalSpec e = make_renewal(RenewalKind::Exponential);
  const LimitDensity h(kProfile, e, e);
  StudyOptions opt;
  opt.source = StudySource::Simulation;
  opt.run = run_options();
  for (auto _ : state) benchmark::DoNotOptimize(convergence_study_serial(kProfile, e, e, {25, 100, 400, 1600}, h, opt));
}

void BM_StudyParallel(benchmark::State& state) {
  const RenewalSpec e = make_renewal(RenewalKind::Exponential);
  const LimitDensity h(kProfile, e, e);
  StudyOptions opt;
  opt.source = StudySource::Simulation;
  opt.run = run_options();
  for (auto _ : state) benchmark::DoNotOptimize(convergence_study(kProfile, e, e, {25, 100, 400, 1600}, h, opt));
}

}  // namespace

BENCHMARK(BM_ReplicationsSerial)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReplicationsParallel)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DiffusionSerial)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DiffusionParallel)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StudySerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StudyParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
