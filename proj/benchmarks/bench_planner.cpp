#include <benchmark/benchmark.h>

#include "discplan/instance.hpp"
#include "discplan/monotone.hpp"
#include "discplan/nonmonotone.hpp"

namespace {

using namespace discplan;

Instance bench_instance(int n, double d, uint64_t seed) {
    auto inst = generate_instance(n, d, {10, 10}, seed);
    while (!inst) inst = generate_instance(n, d, {10, 10}, ++seed);
    inst->buffers = generate_candidate_buffers(*inst, n, 100, seed);
    return *inst;
}

void BM_decompose(benchmark::State& state) {
    const Instance inst = bench_instance(static_cast<int>(state.range(0)), 0.2, 11);
    for (auto _ : state) {
        RegionGraph g = decompose(inst.workspace, inst.radius, inst.labeled_poses(),
                                  inst.radius / 10.0);
        benchmark::DoNotOptimize(g.regions().size());
    }
}
BENCHMARK(BM_decompose)->Arg(5)->Arg(10)->Arg(20);

void BM_rg_dfs(benchmark::State& state) {
    const Instance inst = bench_instance(10, 0.2, 13);
    const RegionGraph g =
        decompose(inst.workspace, inst.radius, inst.labeled_poses(), inst.radius / 10.0);
    const LabelSet occupied = g.empty_label_set();
    for (auto _ : state) {
        auto walk = rg_dfs(g, 0, PoseLabel::start(0), PoseLabel::goal(0), occupied);
        benchmark::DoNotOptimize(walk);
    }
}
BENCHMARK(BM_rg_dfs);

void BM_dfs_dp(benchmark::State& state) {
    const Instance inst = bench_instance(static_cast<int>(state.range(0)), 0.1, 17);
    const RegionGraph g =
        decompose(inst.workspace, inst.radius, inst.labeled_poses(), inst.radius / 10.0);
    for (auto _ : state) {
        PathDictionary dict;
        MonotoneTree tree = dfs_dp(inst, g, Arrangement::all_start(inst.n),
                                   Arrangement::all_goal(inst.n), dict, Deadline::never());
        benchmark::DoNotOptimize(tree.reached);
    }
}
BENCHMARK(BM_dfs_dp)->Arg(5)->Arg(10)->Arg(15);

void BM_informed_search(benchmark::State& state) {
    const Instance inst = bench_instance(static_cast<int>(state.range(0)), 0.225, 19);
    const RegionGraph g =
        decompose(inst.workspace, inst.radius, inst.labeled_poses(), inst.radius / 10.0);
    for (auto _ : state) {
        SearchConfig cfg;
        cfg.seed = 1;
        cfg.time_limit_s = 60.0;
        InformedResult res = informed_search(inst, g, cfg);
        benchmark::DoNotOptimize(res.status);
    }
}
BENCHMARK(BM_informed_search)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
