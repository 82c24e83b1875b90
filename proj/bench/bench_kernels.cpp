// Serial vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare.
#include <benchmark/benchmark.h>

#include "sfsfd/baselines.hpp"
#include "sfsfd/discrepancy.hpp"
#include "sfsfd/sfsfd.hpp"

namespace {

sfsfd::DesignMatrix design(std::size_t n, std::size_t d) {
    sfsfd::RandomStream rng(n * 1000 + d);
    return sfsfd::uniform_random_design(n, d, rng);
}

void BM_DiscrepancySerial(benchmark::State& state) {
    const auto x = design(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(sfsfd::centered_l2_discrepancy_serial(x));
}

void BM_DiscrepancyParallel(benchmark::State& state) {
    const auto x = design(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(sfsfd::centered_l2_discrepancy(x));
}

void BM_ExpectedDiscrepancy(benchmark::State& state) {
    const auto pmf = sfsfd::ProbabilityMassFunction::uniform(10);
    const auto reps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sfsfd::estimate_expected_discrepancy(pmf, 100, 20, reps, 1));
}

}  // namespace

BENCHMARK(BM_DiscrepancySerial)->Args({100, 5})->Args({100, 30})->Args({500, 30})->Args({2000, 10});
BENCHMARK(BM_DiscrepancyParallel)->Args({100, 5})->Args({100, 30})->Args({500, 30})->Args({2000, 10});
BENCHMARK(BM_ExpectedDiscrepancy)->Arg(20)->Arg(50);

BENCHMARK_MAIN();
