#include "ulab/counterexamples.hpp"
#include "ulab/kernels.hpp"
#include "ulab/modality.hpp"
#include "ulab/subordination.hpp"

#include <benchmark/benchmark.h>

using namespace ulab;

namespace {

const ProbabilityMeasure& two_atom() {
    static const ProbabilityMeasure mu = NamedMeasure::bernoulli(1.0);
    return mu;
}

const ProbabilityMeasure& uniform_measure() {
    static const ProbabilityMeasure mu = NamedMeasure::uniform(-1.0, 1.0);
    return mu;
}

void BM_SolveHeightAtomic(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_v(two_atom(), 4.0, 0.3, 1e-12));
    }
}
BENCHMARK(BM_SolveHeightAtomic);

void BM_SolveHeightPiecewiseLinear(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_v(uniform_measure(), 0.5, 0.3, 1e-12));
    }
}
BENCHMARK(BM_SolveHeightPiecewiseLinear);

void BM_LevelSetComponents(benchmark::State& state) {
    const ProbabilityMeasure mu(
        build_free_counterexample(ctrex_defaults::free_a, ctrex_defaults::free_n,
                                  ctrex_defaults::free_rule));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ut_intervals(mu, 1.0));
    }
}
BENCHMARK(BM_LevelSetComponents)->Unit(benchmark::kMillisecond);

void BM_FreeProfile(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(free_density_profile(two_atom(), 4.0, n));
    }
}
BENCHMARK(BM_FreeProfile)->Arg(513)->Arg(2049)->Unit(benchmark::kMillisecond);

void BM_KernelDensity(benchmark::State& state) {
    ConvolvedDensity cd(two_atom(), ProcessKind::Cauchy, 1.0);
    double x = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(density(cd, x));
        x = x < 3.0 ? x + 1e-3 : -3.0;
    }
}
BENCHMARK(BM_KernelDensity);

void BM_ModalityVerdictClassical(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            analyze_modality(two_atom(), ProcessKind::ClassicalGaussian, 0.25));
    }
}
BENCHMARK(BM_ModalityVerdictClassical)->Unit(benchmark::kMillisecond);

void BM_ModalityVerdictFree(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze_modality(two_atom(), ProcessKind::FreeSemicircle, 2.0));
    }
}
BENCHMARK(BM_ModalityVerdictFree)->Unit(benchmark::kMillisecond);

void BM_CriticalTimeFree(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            critical_time(two_atom(), ProcessKind::FreeSemicircle, 0.5, 16.0, 1e-3));
    }
}
BENCHMARK(BM_CriticalTimeFree)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
