// Compares the OpenMP kernels against the serial reference versions.
// Run with --benchmark_filter=matmul etc.; set OMP_NUM_THREADS to vary
// the parallel side.

#include "mwh/augment.hpp"
#include "mwh/matrix.hpp"
#include "mwh/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

mwh::Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    mwh::RngStream stream(seed);
    mwh::Matrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = stream.uniform01();
    return m;
}

void bm_matmul_omp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, n, 1);
    const auto b = random_matrix(n, n, 2);
    for (auto _ : state) {
        auto c = mwh::linalg::matmul(a, b);
        benchmark::DoNotOptimize(c.data());
    }
}

void bm_matmul_ref(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, n, 1);
    const auto b = random_matrix(n, n, 2);
    for (auto _ : state) {
        auto c = mwh::linalg::ref::matmul(a, b);
        benchmark::DoNotOptimize(c.data());
    }
}

void bm_softmax_omp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 256, 3);
    for (auto _ : state) {
        auto p = mwh::linalg::softmax_rows(a);
        benchmark::DoNotOptimize(p.data());
    }
}

void bm_softmax_ref(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 256, 3);
    for (auto _ : state) {
        auto p = mwh::linalg::ref::softmax_rows(a);
        benchmark::DoNotOptimize(p.data());
    }
}

void bm_mixup(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    mwh::Batch batch;
    batch.inputs = random_matrix(n, 512, 4);
    batch.targets = mwh::Matrix(n, 10);
    for (std::size_t i = 0; i < n; ++i) batch.targets.at(i, i % 10) = 1.0;
    mwh::RngStream stream(5);
    for (auto _ : state) {
        auto out = mwh::augment::mixup_batch(batch, 0.2, stream);
        benchmark::DoNotOptimize(out.inputs.data());
    }
}

} // namespace

BENCHMARK(bm_matmul_ref)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_matmul_omp)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_softmax_ref)->Arg(256)->Arg(1024);
BENCHMARK(bm_softmax_omp)->Arg(256)->Arg(1024);
BENCHMARK(bm_mixup)->Arg(128)->Arg(1024);

BENCHMARK_MAIN();
