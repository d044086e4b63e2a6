// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the
// thread count; the two variants produce bitwise-identical results.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ssn/backprop.hpp"
#include "ssn/kernels.hpp"

namespace {

using namespace ssn;

struct Workload {
    std::vector<Vector> vectors;
    std::vector<Example> examples;
};

Workload make_workload(std::size_t n, std::size_t dim) {
    std::mt19937_64 gen(42);
    std::normal_distribution<double> nd;
    Workload w;
    w.vectors.reserve(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        Vector v(static_cast<Eigen::Index>(dim));
        for (auto& x : v) x = nd(gen);
        w.vectors.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i)
        w.examples.push_back({&w.vectors[2 * i], &w.vectors[2 * i + 1], nullptr, nullptr, static_cast<int>(i % 2)});
    return w;
}

// Default-sized network: 100-d inputs, z = 300, d = 50.
template <bool Parallel>
void BM_SsnBatchGradient(benchmark::State& state) {
    const auto batch = static_cast<std::size_t>(state.range(0));
    const auto w = make_workload(batch, 100);
    const auto p = init_ssn(100, 300, 50, 1);
    auto g = zeros_like(p);
    for (auto _ : state) {
        const double loss = Parallel ? batch_gradient_parallel(p, w.examples, 0.4, g)
                                     : batch_gradient_serial(p, w.examples, 0.4, g);
        benchmark::DoNotOptimize(loss);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * batch));
}

template <bool Parallel>
void BM_SsnScore(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto w = make_workload(n, 100);
    Hyperparams h;
    const Model m{h, init_params(h, 1)};
    for (auto _ : state) {
        auto s = Parallel ? score_parallel(m, w.examples) : score_serial(m, w.examples);
        benchmark::DoNotOptimize(s.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

}  // namespace

BENCHMARK(BM_SsnBatchGradient<false>)->Name("ssn_batch_gradient/serial")->Arg(32)->Arg(256);
BENCHMARK(BM_SsnBatchGradient<true>)->Name("ssn_batch_gradient/parallel")->Arg(32)->Arg(256);
BENCHMARK(BM_SsnScore<false>)->Name("ssn_score/serial")->Arg(1000);
BENCHMARK(BM_SsnScore<true>)->Name("ssn_score/parallel")->Arg(1000);

BENCHMARK_MAIN();
