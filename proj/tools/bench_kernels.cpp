// Kernel benchmark: OpenMP dense kernels vs the serial reference
// implementations used as test oracles.

#include <benchmark/benchmark.h>

#include <random>

#include "ecdkit/matcore.hpp"
#include "ecdkit/ref.hpp"

namespace {

using ecdkit::CMat;
using ecdkit::cplx;
using ecdkit::DimSplit;

CMat random_cmat(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMat m(rows, cols);
    for (cplx& z : m.data()) z = cplx(n(rng), n(rng));
    return m;
}

void bm_multiply(benchmark::State& state) {
    const int d = int(state.range(0));
    std::mt19937_64 rng(1);
    const CMat a = random_cmat(d, d, rng), b = random_cmat(d, d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}

void bm_multiply_serial(benchmark::State& state) {
    const int d = int(state.range(0));
    std::mt19937_64 rng(1);
    const CMat a = random_cmat(d, d, rng), b = random_cmat(d, d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ecdkit::ref::multiply(a, b));
}

void bm_tensor(benchmark::State& state) {
    const int d = int(state.range(0));
    std::mt19937_64 rng(2);
    const CMat a = random_cmat(d, d, rng), b = random_cmat(d, d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ecdkit::tensor(a, b));
}

void bm_tensor_serial(benchmark::State& state) {
    const int d = int(state.range(0));
    std::mt19937_64 rng(2);
    const CMat a = random_cmat(d, d, rng), b = random_cmat(d, d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ecdkit::ref::tensor(a, b));
}

void bm_partial_trace(benchmark::State& state) {
    const int d = int(state.range(0));
    std::mt19937_64 rng(3);
    const CMat m = random_cmat(d * d, d * d, rng);
    const DimSplit split{{d, d}};
    for (auto _ : state) benchmark::DoNotOptimize(ecdkit::partial_trace(m, split, {0}));
}

void bm_partial_trace_serial(benchmark::State& state) {
    const int d = int(state.range(0));
    std::mt19937_64 rng(3);
    const CMat m = random_cmat(d * d, d * d, rng);
    const DimSplit split{{d, d}};
    for (auto _ : state) benchmark::DoNotOptimize(ecdkit::ref::partial_trace(m, split, {0}));
}

BENCHMARK(bm_multiply)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(bm_multiply_serial)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(bm_tensor)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bm_tensor_serial)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bm_partial_trace)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(bm_partial_trace_serial)->Arg(8)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
