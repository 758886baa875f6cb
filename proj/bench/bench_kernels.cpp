// Serial reference kernels against the OpenMP kernels, and a suite batch.
// Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "intcons/dynamics.hpp"
#include "intcons/suites.hpp"

namespace {

using namespace intcons;

struct Fixture {
    IntervalSystem system;
    State x;
    State out;
};

// Ring plus `extra` random in-edges per node: strongly connected, O(n) to
// build, unlike the all-pairs suite generator.
Fixture make_fixture(std::size_t n, std::size_t extra = 7) {
    Rng rng(2024);
    std::vector<EdgeSpec> edges;
    edges.reserve(n * (extra + 1));
    for (std::size_t i = 0; i < n; ++i) {
        edges.push_back({(i + 1) % n, i, rng.uniform(0.1, 2.0)});
        for (std::size_t k = 0; k < extra; ++k) {
            const std::size_t j = rng.index(0, n - 1);
            if (j != i && j != (i + 1) % n) edges.push_back({j, i, rng.uniform(0.1, 2.0)});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
        return a.target != b.target ? a.target < b.target : a.source < b.source;
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const EdgeSpec& a, const EdgeSpec& b) {
                                return a.target == b.target && a.source == b.source;
                            }),
                edges.end());
    IntervalSystem system(Network::create(n, edges), random_intervals(rng, n));
    State x = random_state(rng, n, -10.0, 10.0);
    return {std::move(system), std::move(x), State(n)};
}

template <bool Parallel>
void BM_VectorField(benchmark::State& state) {
    auto f = make_fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel) {
            vector_field_into(f.system, f.x, f.out);
        } else {
            reference::vector_field_into(f.system, f.x, f.out);
        }
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.system.network().edge_count()));
}

template <bool Parallel>
void BM_DiscreteStep(benchmark::State& state) {
    auto f = make_fixture(static_cast<std::size_t>(state.range(0)));
    const double eps = 0.9 / max_in_weight_sum(f.system.network());
    for (auto _ : state) {
        if constexpr (Parallel) {
            discrete_step_into(f.system, f.x, eps, f.out);
        } else {
            reference::discrete_step_into(f.system, f.x, eps, f.out);
        }
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.system.network().edge_count()));
}

void BM_SuiteBatch(benchmark::State& state) {
    for (auto _ : state) {
        auto verdicts = run_suite("hull", 9, static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(verdicts.data());
    }
}

}  // namespace

BENCHMARK(BM_VectorField<false>)->Name("vector_field/reference")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_VectorField<true>)->Name("vector_field/parallel")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_DiscreteStep<false>)->Name("discrete_step/reference")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_DiscreteStep<true>)->Name("discrete_step/parallel")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_SuiteBatch)->Name("suite_batch/hull")->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
