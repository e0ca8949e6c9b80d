#include <benchmark/benchmark.h>

#include <random>

#include "ringbec/bessel.hpp"
#include "ringbec/dynamics.hpp"
#include "ringbec/spectrum.hpp"
#include "ringbec/tof.hpp"

using namespace ringbec;

namespace {

ModeState random_state(int m_max) {
    std::mt19937 gen(7);
    std::normal_distribution<double> n;
    ModeState s(m_max);
    for (int m = -m_max; m <= m_max; ++m) {
        s.at(Ring::upper, m) = {n(gen), n(gen)};
        s.at(Ring::lower, m) = {n(gen), n(gen)};
    }
    return s;
}

void nonlinear_fft_bench(benchmark::State& st) {
    const auto s = random_state(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(nonlinear_fft(s.ring(Ring::upper)));
}
BENCHMARK(nonlinear_fft_bench)->Arg(5)->Arg(15)->Arg(40)->Arg(100);

void nonlinear_direct_bench(benchmark::State& st) {
    const auto s = random_state(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(nonlinear_direct(s.ring(Ring::upper)));
}
BENCHMARK(nonlinear_direct_bench)->Arg(5)->Arg(15)->Arg(40);

void rhs_bench(benchmark::State& st) {
    const auto s = random_state(15);
    const CoupledRingModel model{1.6, 0.01};
    for (auto _ : st) benchmark::DoNotOptimize(rhs_modes(s, model));
}
BENCHMARK(rhs_bench);

void eigensolve_bench(benchmark::State& st) {
    double kappa = 0.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(bogoliubov_eigensolve(2, 2.0, kappa));
        kappa = kappa > 6.0 ? 0.0 : kappa + 0.01;
    }
}
BENCHMARK(eigensolve_bench);

void bessel_bench(benchmark::State& st) {
    double x = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(bessel_j_sequence(15, x));
        x = x > 20.0 ? 0.1 : x + 0.37;
    }
}
BENCHMARK(bessel_bench);

void tof_image_bench(benchmark::State& st) {
    const auto s = random_state(15);
    for (auto _ : st) benchmark::DoNotOptimize(tof_image(s, Ring::upper, 12.0, 101));
}
BENCHMARK(tof_image_bench)->Unit(benchmark::kMillisecond);

void evolve_bench(benchmark::State& st) {
    RunConfig c;
    c.epsilon = 2.0;
    c.kappa = 1.6;
    c.integrator.t_end = 10.0;
    const auto cfg = validate_config(c);
    const auto s0 = init_state(cfg);
    const auto model = model_for(cfg, s0);
    for (auto _ : st) benchmark::DoNotOptimize(evolve(s0, cfg.integrator(), model));
}
BENCHMARK(evolve_bench)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
