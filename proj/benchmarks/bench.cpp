#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fracplanar/examples.hpp"
#include "fracplanar/solver.hpp"
#include "fracplanar/specfun.hpp"
#include "fracplanar/stability.hpp"

using namespace fracplanar;

namespace {

const CharTriple kEx1{0.0, 1.0, 0.5};
const FracOrders kOrders(1.0 / 3.0, 0.5);

void BM_WindingCount(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(winding_count(kEx1, kOrders));
}
BENCHMARK(BM_WindingCount);

void BM_SufficientCriteria(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sufficient_criteria(kEx1, kOrders));
}
BENCHMARK(BM_SufficientCriteria);

void BM_ImaginaryZeroScan(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(imaginary_zero_test(kEx1, kOrders));
}
BENCHMARK(BM_ImaginaryZeroScan);

void BM_KernelEvalAll(benchmark::State& state) {
    const LaplaceKernels kernels(kEx1, kOrders);
    const double t = std::pow(2.0, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels.eval_all(t));
}
BENCHMARK(BM_KernelEvalAll)->Arg(-6)->Arg(0)->Arg(6);

void BM_CacheLookup(benchmark::State& state) {
    static const SpecFunCache cache(kEx1, kOrders, 16.0);
    double t = 0.011;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cache.S(SIndex::Alpha1, t));
        t = t < 15.0 ? t * 1.01 : 0.011;
    }
}
BENCHMARK(BM_CacheLookup);

void BM_KernelWeights(benchmark::State& state) {
    static const SpecFunCache cache(kEx1, kOrders, 16.0);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const double h = 16.0 / static_cast<double>(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernel_weights(cache, SIndex::Alpha1, h, n));
    state.SetComplexityN(static_cast<int64_t>(n));
}
BENCHMARK(BM_KernelWeights)->Arg(256)->Arg(1024)->Arg(4096)->Complexity();

void BM_ConvolveWeights(benchmark::State& state) {
    static const SpecFunCache cache(kEx1, kOrders, 16.0);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const double h = 16.0 / static_cast<double>(n);
    const ConvWeights w = kernel_weights(cache, SIndex::Alpha1, h, n);
    const std::vector<double> f(n + 1, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(convolve_weights(w, f));
    state.SetComplexityN(static_cast<int64_t>(n));
}
BENCHMARK(BM_ConvolveWeights)->Arg(256)->Arg(1024)->Arg(4096)->Complexity();

void BM_PiTrapezoidalStep(benchmark::State& state) {
    const ExampleSpec ex = paper_example(6);
    StepperConfig cfg;
    cfg.h = 0.01;
    cfg.t_end = static_cast<double>(state.range(0)) * cfg.h;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_pi_trapezoidal(ex.system, {0.1, -0.2}, cfg));
    state.SetComplexityN(static_cast<int64_t>(state.range(0)));
}
BENCHMARK(BM_PiTrapezoidalStep)->Arg(250)->Arg(500)->Arg(1000)->Complexity();

} // namespace

BENCHMARK_MAIN();
