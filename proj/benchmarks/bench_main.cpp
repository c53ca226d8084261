#include <benchmark/benchmark.h>

#include <complex>

#include "lowfreq/asymptotics.hpp"
#include "lowfreq/diskref.hpp"
#include "lowfreq/logseries.hpp"
#include "lowfreq/potential.hpp"
#include "lowfreq/specfun.hpp"

using namespace lowfreq;

namespace {

void BM_BesselJY(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::bessel_j(n, x));
        benchmark::DoNotOptimize(specfun::bessel_y(n, x));
        x = x < 60.0 ? x * 1.01 : 0.3;
    }
}
BENCHMARK(BM_BesselJY)->Arg(0)->Arg(8)->Arg(32);

void BM_BesselK(benchmark::State& state) {
    double x = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::bessel_k(0, x));
        benchmark::DoNotOptimize(specfun::bessel_k(1, x));
        x = x < 30.0 ? x * 1.07 : 0.05;
    }
}
BENCHMARK(BM_BesselK);

void BM_SsfDisk(benchmark::State& state) {
    const double mu = state.range(0) / 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(diskref::ssf_disk(1.0, mu, 1e-10));
    }
}
BENCHMARK(BM_SsfDisk)->Arg(1)->Arg(100)->Arg(6400);

void BM_EquilibriumSolve(benchmark::State& state) {
    potential::Geometry g;
    g.primitives.push_back(potential::Ellipse{{0, 0}, 2.0, 1.0, 0.0});
    const auto mesh = potential::build_mesh(g, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(potential::solve_equilibrium(mesh));
    }
}
BENCHMARK(BM_EquilibriumSolve)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SeriesInvert(benchmark::State& state) {
    using namespace lowfreq::logseries;
    LogPowSeries::CoeffMap m;
    m[{0, 0}] = 1.0;
    for (int j = 1; j <= 4; ++j)
        for (int k = 0; k <= j; ++k) m[{2 * j, k}] = std::complex<double>(0.1 / j, 0.05);
    const LogPowSeries alpha({0, 0}, m);
    const std::complex<double> log_z = std::log(std::complex<double>(0.0, 0.1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            geometric_log_invert(alpha, log_z, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_SeriesInvert)->Arg(8)->Arg(12);

} // namespace

BENCHMARK_MAIN();
