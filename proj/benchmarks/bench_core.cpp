#include <benchmark/benchmark.h>

#include "polycorr/genpoly.hpp"
#include "polycorr/geometry.hpp"

using namespace polycorr;

static void BM_Orient2(benchmark::State& state) {
    Pt i{3, 7}, j{-2, 5}, k{11, -4};
    for (auto _ : state) benchmark::DoNotOptimize(orient2(i, j, k));
}
BENCHMARK(BM_Orient2);

static void BM_LatticePoints(benchmark::State& state) {
    const Int m = state.range(0);
    auto poly = LatticePolygon::from_boundary({{0, 0}, {0, m}, {m, m}, {m, 0}});
    for (auto _ : state) benchmark::DoNotOptimize(lattice_points(poly));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LatticePoints)->Arg(4)->Arg(16)->Arg(64);

static void BM_GenPolyMul(benchmark::State& state) {
    GenPoly a, b;
    for (int i = 0; i < 32; ++i) {
        a += t_var(1 + i % 5, 1 + i % 3) * mu_pow(-i % 4) * (i + 1);
        b += x_var({i % 7, i % 3}, 1 + i % 2) * beta_pow(i % 6) * (2 * i + 1);
    }
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_GenPolyMul);

BENCHMARK_MAIN();
