// Microbenchmarks for the core operations and both engines.

#include <benchmark/benchmark.h>

#include "ubgspan/distsim.hpp"
#include "ubgspan/greedy.hpp"
#include "ubgspan/relaxed.hpp"

using namespace ubgspan;

namespace {

UbgInstance instance_for(int n) {
    return generate_instance(n, 2, 0.7, GenPolicy::bernoulli(0.5),
                             static_cast<std::uint64_t>(n));
}

void BM_Dijkstra(benchmark::State& state) {
    auto inst = instance_for(static_cast<int>(state.range(0)));
    auto g = instance_graph(inst);
    for (auto _ : state) benchmark::DoNotOptimize(dijkstra(g, 0));
}
BENCHMARK(BM_Dijkstra)->Arg(100)->Arg(400);

void BM_MstWeight(benchmark::State& state) {
    auto inst = instance_for(static_cast<int>(state.range(0)));
    auto g = instance_graph(inst);
    for (auto _ : state) benchmark::DoNotOptimize(mst_weight(g));
}
BENCHMARK(BM_MstWeight)->Arg(100)->Arg(400);

void BM_SeqGreedy(benchmark::State& state) {
    auto inst = instance_for(static_cast<int>(state.range(0)));
    auto g = instance_graph(inst);
    for (auto _ : state) benchmark::DoNotOptimize(seq_greedy(g, 1.5));
}
BENCHMARK(BM_SeqGreedy)->Arg(50)->Arg(150);

void BM_RelaxedGreedy(benchmark::State& state) {
    auto inst = instance_for(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_relaxed_greedy(inst, 1.5));
}
BENCHMARK(BM_RelaxedGreedy)->Arg(50)->Arg(150);

void BM_Distributed(benchmark::State& state) {
    auto inst = instance_for(static_cast<int>(state.range(0)));
    SimConfig cfg;
    cfg.inst = inst;
    cfg.t = 1.5;
    cfg.params = derive_params(1.5, inst.alpha, inst.n());
    for (auto _ : state) benchmark::DoNotOptimize(run_distributed(cfg));
}
BENCHMARK(BM_Distributed)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
