#include "hessval/abel.hpp"
#include "hessval/convex_function.hpp"
#include "hessval/sym_matrix.hpp"
#include "hessval/transforms.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace hessval;

GridData quadratic_grid(int nodes) {
    Vec lo = Vec::Constant(2, -2.0), hi = Vec::Constant(2, 2.0);
    GridData g = GridData::make(lo, hi, {nodes, nodes});
    g.for_each([&](const std::vector<int>& idx, std::size_t k) {
        Vec x = g.node(idx);
        g.values[k] = 0.5 * x.squaredNorm();
    });
    return g;
}

void BM_LegendreGrid2D(benchmark::State& state) {
    const int nodes = static_cast<int>(state.range(0));
    ConvexFunction f = ConvexFunction::grid(quadratic_grid(nodes));
    for (auto _ : state) {
        ConvexFunction conj = legendre(f);
        benchmark::DoNotOptimize(conj.grid_data().values.data());
    }
    state.SetComplexityN(nodes * nodes);
}
BENCHMARK(BM_LegendreGrid2D)->Arg(65)->Arg(129)->Arg(257)->Complexity();

void BM_MoreauGrid2D(benchmark::State& state) {
    const int nodes = static_cast<int>(state.range(0));
    ConvexFunction f = ConvexFunction::grid(quadratic_grid(nodes));
    for (auto _ : state) {
        ConvexFunction env = moreau_yosida(f, 0.5);
        benchmark::DoNotOptimize(env.grid_data().values.data());
    }
}
BENCHMARK(BM_MoreauGrid2D)->Arg(65)->Arg(129)->Arg(257);

void BM_ElementarySymmetric(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Mat A(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) A(r, c) = A(c, r) = uni(rng);
    for (auto _ : state) {
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) acc += elementary_symmetric(A, k);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_ElementarySymmetric)->Arg(3)->Arg(5)->Arg(8);

void BM_AbelForward(benchmark::State& state) {
    ZetaProfile g = ZetaProfile::from_function([](double s) { return std::exp(-s * s); }, 6.0);
    for (auto _ : state) {
        double acc = 0.0;
        for (double t : {0.0, 0.5, 1.0, 1.5}) acc += abel_forward(g, t);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_AbelForward);

}  // namespace

BENCHMARK_MAIN();
