// Serial reference vs OpenMP for the population-wide kernels.

#include <benchmark/benchmark.h>

#include "viral/benchmarks.hpp"
#include "viral/engine.hpp"
#include "viral/kernels.hpp"
#include "viral/local_search.hpp"

namespace {

using namespace viral;

Population make_population(std::size_t n, const Bounds& b) {
    RngStream rng(7);
    return uniform_init(b, n, rng);
}

template <Execution Mode>
void BM_EvaluateShekel(benchmark::State& state) {
    const auto spec = bench::registry_lookup("shekel");
    const auto pop = make_population(static_cast<std::size_t>(state.range(0)), spec.bounds);
    std::vector<double> values(pop.size());
    for (auto _ : state) {
        kernels::evaluate(Mode, spec.objective, 0, pop, values);
        benchmark::DoNotOptimize(values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution Mode>
void BM_AssignCenters(benchmark::State& state) {
    const Bounds b = Bounds::cube(2, -3.0, 3.0);
    const auto centers = make_centers(b, 7);
    const auto pop = make_population(static_cast<std::size_t>(state.range(0)), b);
    std::vector<std::size_t> out(pop.size());
    for (auto _ : state) {
        kernels::assign_centers(Mode, pop, centers, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution Mode>
void BM_Epidemic(benchmark::State& state) {
    const auto spec = bench::registry_lookup("rosenbrock");
    DEConfig cfg;
    cfg.pop_size = static_cast<std::size_t>(state.range(0));
    cfg.generations = 75;
    cfg.execution = Mode;
    const Bounds region = Bounds::cube(2, 0.7, 1.3);
    for (auto _ : state) {
        RngStream rng(11);
        auto r = de_optimize(spec.objective, region, cfg, Point{1.2, 1.2}, 0, rng);
        benchmark::DoNotOptimize(r.best_value);
    }
}

BENCHMARK(BM_EvaluateShekel<Execution::serial>)->Arg(1000)->Arg(5000);
BENCHMARK(BM_EvaluateShekel<Execution::openmp>)->Arg(1000)->Arg(5000);
BENCHMARK(BM_AssignCenters<Execution::serial>)->Arg(1000)->Arg(5000);
BENCHMARK(BM_AssignCenters<Execution::openmp>)->Arg(1000)->Arg(5000);
BENCHMARK(BM_Epidemic<Execution::serial>)->Arg(150)->Arg(300);
BENCHMARK(BM_Epidemic<Execution::openmp>)->Arg(150)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
