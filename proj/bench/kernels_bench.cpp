// Serial reference kernels against their OpenMP counterparts on a torus sample.

#include "diffgeo/carre_du_champ.hpp"
#include "diffgeo/manifolds.hpp"
#include "diffgeo/metric.hpp"
#include "diffgeo/reference.hpp"

#include <benchmark/benchmark.h>

#include <map>

namespace {

using namespace diffgeo;

const PointCloud& cloud(int n) {
    static std::map<int, PointCloud> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, sample(ManifoldSpec::torus(), n, 7).cloud).first;
    return it->second;
}

const LaplacianOperator& op(int n) {
    static std::map<int, LaplacianOperator> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_operator(cloud(n))).first;
    return it->second;
}

void BM_KnnSerial(benchmark::State& state) {
    const auto& pc = cloud(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::knn_graph(pc, 128));
}
void BM_KnnParallel(benchmark::State& state) {
    const auto& pc = cloud(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(knn_graph(pc, 128));
}

void BM_GammaSerial(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const Vector x = cloud(n).coordinate(0), y = cloud(n).coordinate(1);
    for (auto _ : state) benchmark::DoNotOptimize(reference::gamma(op(n), x, y));
}
void BM_GammaParallel(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const Vector x = cloud(n).coordinate(0), y = cloud(n).coordinate(1);
    for (auto _ : state) benchmark::DoNotOptimize(gamma(op(n), x, y));
}

void BM_GramSerial(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(reference::gram_stack(op(n), cloud(n)));
}
void BM_GramParallel(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gram_stack(op(n), cloud(n)));
}

}  // namespace

BENCHMARK(BM_KnnSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnParallel)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GammaSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GammaParallel)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GramSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
