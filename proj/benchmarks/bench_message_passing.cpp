#include <benchmark/benchmark.h>

#include "cavsat/bp.hpp"
#include "cavsat/oracle.hpp"
#include "cavsat/popdyn.hpp"
#include "cavsat/sp.hpp"
#include "cavsat/walksat.hpp"

namespace {

using namespace cavsat;

void BM_BpSweeps(benchmark::State& state) {
    const auto n = static_cast<VarId>(state.range(0));
    const Formula f = generate_random(n, 3.5, 1);
    bp::Engine engine(f);
    bp::Config cfg;
    cfg.tol = 0.0;  // never converge: measure raw sweep throughput
    cfg.max_iters = 1;
    cfg.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.run(cfg));
    }
    state.SetItemsProcessed(state.iterations() * 3 * static_cast<std::int64_t>(f.n_clauses()));
}
BENCHMARK(BM_BpSweeps)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SpSweeps(benchmark::State& state) {
    const auto n = static_cast<VarId>(state.range(0));
    const Formula f = generate_random(n, 4.2, 1);
    sp::Engine engine(f);
    sp::Config cfg;
    cfg.tol = 0.0;
    cfg.max_iters = 1;
    cfg.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.run(cfg));
    }
    state.SetItemsProcessed(state.iterations() * 3 * static_cast<std::int64_t>(f.n_clauses()));
}
BENCHMARK(BM_SpSweeps)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PopdynSweep(benchmark::State& state) {
    popdyn::Config cfg;
    cfg.pop_size = static_cast<std::size_t>(state.range(0));
    cfg.init = popdyn::Init::Polarized;
    cfg.seed = 1;
    const popdyn::EnsembleSpec spec{4.2};
    popdyn::Population pop = popdyn::make_population(cfg, spec);
    Rng rng(2);
    std::uint64_t contra = 0, tries = 0;
    for (auto _ : state) {
        popdyn::sweep(pop, spec, rng, contra, tries);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PopdynSweep)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_WalksatFlips(benchmark::State& state) {
    const Formula f = generate_random(static_cast<VarId>(state.range(0)), 3.0, 3);
    walksat::Config cfg;
    cfg.tries = 1;
    cfg.max_flips_per_try = 20000;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        cfg.seed = ++seed;
        benchmark::DoNotOptimize(walksat::solve(f, cfg));
    }
}
BENCHMARK(BM_WalksatFlips)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EnumerateCount(benchmark::State& state) {
    const Formula f = generate_random(static_cast<VarId>(state.range(0)), 4.2, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::count_models(f, Assignment(f.n_vars())));
    }
}
BENCHMARK(BM_EnumerateCount)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
