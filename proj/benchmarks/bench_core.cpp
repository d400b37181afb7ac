#include <benchmark/benchmark.h>

#include <random>

#include <latboson/covariance.hpp>
#include <latboson/hs.hpp>
#include <latboson/permanent.hpp>
#include <latboson/walks.hpp>

using namespace latboson;

namespace {

Eigen::MatrixXcd random_complex(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(g(rng), g(rng));
    return m;
}

void bm_ryser(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Eigen::MatrixXcd m = random_complex(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ryser_permanent(m));
    state.SetComplexityN(n);
}
BENCHMARK(bm_ryser)->DenseRange(4, 14, 2);

void bm_averaged_permanent_cycles(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    Eigen::MatrixXcd m = random_complex(4, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(averaged_permanent(m, N, 1.0, PermanentMethod::cycles));
    }
}
BENCHMARK(bm_averaged_permanent_cycles)->DenseRange(2, 8, 2);

void bm_build_and_invert(benchmark::State& state) {
    int ntau = static_cast<int>(state.range(0));
    TorusLattice lat(1, 3);
    auto E = build_kinetic(lat, LaplacianPlusMass{0.5});
    auto v = build_interaction(lat, Onsite{1.0});
    GaussianSpec spec(v, ntau);
    AuxField h = sample_aux(spec, 3, 0);
    for (auto _ : state) {
        auto op = build_q(BlockVariant::Q, E, nullptr, nullptr, h, 1.0);
        benchmark::DoNotOptimize(invert(op));
    }
}
BENCHMARK(bm_build_and_invert)->RangeMultiplier(2)->Range(4, 64);

void bm_estimate_zc_sample(benchmark::State& state) {
    TorusLattice lat(1, 2);
    auto E = build_kinetic(lat, Laplacian{});
    auto v = build_interaction(lat, Onsite{1.0});
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_zc(E, v, 2, 1.0, 8, BlockVariant::Q, 64, ++seed, 1));
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(bm_estimate_zc_sample);

void bm_walks_transfer(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    TorusLattice lat(1, 3);
    auto E = build_kinetic(lat, Laplacian{});
    auto v = build_interaction(lat, Onsite{1.0});
    for (auto _ : state) benchmark::DoNotOptimize(z_walks_transfer(E, v, N, 1.0, 8));
}
BENCHMARK(bm_walks_transfer)->DenseRange(1, 4);

}  // namespace

BENCHMARK_MAIN();
