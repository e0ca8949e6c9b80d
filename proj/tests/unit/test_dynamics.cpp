#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "ringbec/dynamics.hpp"
#include "ringbec/observables.hpp"
#include "ringbec/rng.hpp"
#include "ringbec/spectrum.hpp"

using namespace ringbec;
using doctest::Approx;

namespace {

constexpr cplx I{0.0, 1.0};

ModeState random_state(int m_max, std::uint64_t seed, double scale = 1.0) {
    RngStream rng(seed);
    ModeState s(m_max);
    for (Ring r : {Ring::upper, Ring::lower})
        for (auto& a : s.ring(r)) a = scale * cplx(rng.normal(), rng.normal());
    return s;
}

double max_diff(const ModeState& a, const ModeState& b) {
    double d = 0.0;
    for (Ring r : {Ring::upper, Ring::lower})
        for (int m = -a.m_max(); m <= a.m_max(); ++m) d = std::max(d, std::abs(a.at(r, m) - b.at(r, m)));
    return d;
}

IntegratorSettings until(double t_end, double interval = 0.05) {
    IntegratorSettings s;
    s.t_end = t_end;
    s.sample_interval = interval;
    return s;
}

CheckedConfig config(double kappa, double t_end = 10.0) {
    RunConfig c;
    c.epsilon = 2.0;
    c.kappa = kappa;
    c.integrator.t_end = t_end;
    return validate_config(c);
}

}  // namespace

TEST_CASE("stationary states rotate at the chemical potential") {
    const double eps = 2.0, kappa = 1.6, n0 = 50.0;
    const CoupledRingModel model{kappa, gamma_for_epsilon(eps, 2 * n0)};
    for (auto [parity, mu] : {std::pair{StackParity::symmetric, eps + kappa}, std::pair{StackParity::antisymmetric, eps - kappa}}) {
        const auto s0 = stationary_state(n0, parity, 0.0, 15);
        const auto traj = evolve(s0, until(1.0), model);
        for (const auto& smp : traj.samples) {
            const cplx expect = std::sqrt(n0) * std::exp(-I * mu * smp.tau());
            const double sign = parity == StackParity::symmetric ? 1.0 : -1.0;
            CHECK(std::abs(smp.state.at(Ring::upper, 0) - expect) < 1e-8);
            CHECK(std::abs(smp.state.at(Ring::lower, 0) - sign * expect) < 1e-8);
            CHECK(std::norm(smp.state.at(Ring::upper, 0)) == Approx(n0).epsilon(1e-10));
        }
    }
    const auto still = stationary_state(10.0, StackParity::antisymmetric, 0.3, 4);
    const auto frozen = integrate_to(still, 7.0, until(7.0), {0.0, 0.0});
    CHECK(max_diff(still, frozen) == 0.0);
    CHECK(still.at(Ring::upper, 0) == std::polar(std::sqrt(10.0), 0.3));
}

TEST_CASE("init_state protocol") {
    RunConfig c;
    c.epsilon = 2.0;
    c.seed_magnitude = 0.0;
    c.fluctuation_scale = 0.0;
    const auto quiet = init_state(validate_config(c));
    CHECK(quiet == stationary_state(c.n0, StackParity::symmetric, 0.0, 15));

    const auto cfg = config(1.6);
    const auto a = init_state(cfg), b = init_state(cfg), d = init_state(cfg.with_seed(99));
    CHECK(a == b);
    double seeded = 0.0;
    for (Ring r : {Ring::upper, Ring::lower})
        for (int m = -15; m <= 15; ++m) {
            if (m == 0) {
                CHECK(a.at(r, 0).imag() == 0.0);
                CHECK(a.at(r, 0).real() > 0.0);
                CHECK(a.at(r, 0) != d.at(r, 0));
                continue;
            }
            seeded += std::norm(a.at(r, m));
            const double expect = std::abs(m) <= 5 ? 1e-4 * std::sqrt(cfg.n0()) : 0.0;
            CHECK(std::abs(a.at(r, m)) == Approx(expect).epsilon(1e-12));
            CHECK(std::abs(d.at(r, m)) == Approx(expect).epsilon(1e-12));
        }
    CHECK(seeded / a.total_norm() == Approx(1e-7).epsilon(0.03));
}

TEST_CASE("rhs single mode reduction") {
    ModeState s(6);
    s.at(Ring::upper, 0) = {3.0, 1.0};
    s.at(Ring::lower, 0) = {-0.5, 2.0};
    const CoupledRingModel model{0.8, 0.3};
    const auto d = rhs_modes(s, model);
    const double g = model.gamma / (2 * pi);
    for (Ring r : {Ring::upper, Ring::lower}) {
        const cplx a = s.at(r, 0), o = s.at(other(r), 0);
        CHECK(std::abs(d.at(r, 0) - (-I * (model.kappa * o + g * std::norm(a) * a))) < 1e-13);
        for (int m = 1; m <= 6; ++m) {
            CHECK(d.at(r, m) == cplx{});
            CHECK(d.at(r, -m) == cplx{});
        }
    }
}

TEST_CASE("nonlinear term against the direct triple sum") {
    for (int m_max : {1, 3, 6, 15}) {
        const auto s = random_state(m_max, 17 + m_max);
        const auto ref = oracle::cubic_convolution(s.ring(Ring::upper));
        const auto fft = nonlinear_fft(s.ring(Ring::upper));
        const auto direct = nonlinear_direct(s.ring(Ring::upper));
        double scale = 0.0, e_fft = 0.0, e_direct = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            scale = std::max(scale, std::abs(ref[i]));
            e_fft = std::max(e_fft, std::abs(fft[i] - ref[i]));
            e_direct = std::max(e_direct, std::abs(direct[i] - ref[i]));
        }
        CHECK(e_fft < 1e-12 * scale);
        CHECK(e_direct < 1e-12 * scale);
    }
}

TEST_CASE("linear dynamics is a two-level rotation per mode") {
    const auto s0 = random_state(8, 5, 3.0);
    for (auto method : {IntegratorSettings::Method::adaptive, IntegratorSettings::Method::rk4}) {
        auto set = until(10.0, 0.5);
        set.method = method;
        const auto traj = evolve(s0, set, {1.3, 0.0});
        for (const auto& smp : traj.samples) CHECK(max_diff(smp.state, oracle::rabi_solution(s0, 1.3, smp.tau())) < 1e-8);
    }
    GridOracleSettings gs;
    gs.t_end = 5.0;
    gs.sample_interval = 0.5;
    gs.grid_size = 64;
    const auto grid = evolve_grid_oracle(s0, gs, {1.3, 0.0});
    for (const auto& smp : grid.samples) CHECK(max_diff(smp.state, oracle::rabi_solution(s0, 1.3, smp.tau())) < 1e-9);
}

TEST_CASE("conservation of a stationary state over tau = 100") {
    const auto s0 = stationary_state(1e4, StackParity::symmetric, 0.0, 15);
    const auto traj = evolve(s0, until(100.0, 1.0), {1.6, gamma_for_epsilon(2.0, 2e4)});
    CHECK(traj.conservation.norm_drift < 1e-8);
    CHECK(traj.conservation.energy_drift < 1e-6);
    CHECK(traj.conservation.lz_drift < 1e-8);
    CHECK_FALSE(traj.conservation.flagged);
}

TEST_CASE("energy functional") {
    const auto s = random_state(5, 11);
    const CoupledRingModel model{0.7, 0.9};
    double kinetic = 0.0, tunnel = 0.0, inter = 0.0;
    for (Ring r : {Ring::upper, Ring::lower}) {
        const auto conv = oracle::cubic_convolution(s.ring(r));
        for (int m = -5; m <= 5; ++m) {
            kinetic += m * m * std::norm(s.at(r, m));
            inter += (std::conj(s.at(r, m)) * conv[m + 5]).real();
        }
    }
    for (int m = -5; m <= 5; ++m) tunnel += 2.0 * (std::conj(s.at(Ring::upper, m)) * s.at(Ring::lower, m)).real();
    const double expect = kinetic + model.kappa * tunnel + model.gamma / (4 * pi) * inter;
    CHECK(energy(s, model) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("parametric growth of a seeded pair") {
    RunConfig c;
    c.epsilon = 2.0;
    c.kappa = 1.6;
    c.n0 = 1e8;
    c.fluctuation_scale = 0.0;
    c.seed_mode_cutoff = 1;
    c.integrator.t_end = 6.0;
    const auto cfg = validate_config(c);
    const auto s0 = init_state(cfg);
    const auto traj = evolve(s0, cfg.integrator(), model_for(cfg, s0));
    const auto fit = fit_growth_rate(traj, 1);
    CHECK(fit.rate == Approx(omega_minus(1, 2.0, 1.6).growth_rate()).epsilon(0.02));
}

TEST_CASE("chiral symmetry of the linear stage") {
    ModeState s = stationary_state(1e6, StackParity::symmetric, 0.0, 15);
    for (Ring r : {Ring::upper, Ring::lower})
        for (int m = 1; m <= 5; ++m) s.at(r, m) = s.at(r, -m) = std::polar(0.1, 0.4 * m + (r == Ring::upper ? 0.0 : 1.0));
    const double n = s.total_norm();
    const auto traj = evolve(s, until(4.0, 0.5), {1.6, gamma_for_epsilon(2.0, n)});
    for (const auto& smp : traj.samples)
        for (Ring r : {Ring::upper, Ring::lower})
            for (int m = 1; m <= 15; ++m) {
                const double p = std::norm(smp.state.at(r, m)), q = std::norm(smp.state.at(r, -m));
                CHECK(std::abs(p - q) <= 1e-9 * p + 1e-16 * n);
            }
}

TEST_CASE("integrators agree") {
    const auto cfg = config(1.6, 6.0);
    const auto s0 = init_state(cfg);
    const auto model = model_for(cfg, s0);
    auto rk4 = cfg.integrator();
    rk4.method = IntegratorSettings::Method::rk4;
    rk4.dt = 2e-3;
    const auto a = evolve(s0, cfg.integrator(), model);
    const auto b = evolve(s0, rk4, model);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(max_diff(a.samples[i].state, b.samples[i].state) < 1e-6);

    const auto mid = integrate_to(s0, 3.0, cfg.integrator(), model);
    CHECK(mid.tau() == 3.0);
    CHECK(max_diff(mid, a.samples[60].state) < 1e-7);
}

TEST_CASE("grid oracle") {
    SUBCASE("plane wave stays a plane wave") {
        ModeState s(4);
        s.at(Ring::upper, 2) = 5.0;
        s.at(Ring::lower, 2) = 5.0;
        GridOracleSettings gs;
        gs.t_end = 2.0;
        gs.sample_interval = 0.5;
        gs.grid_size = 32;
        const double g = 0.2, kappa = 0.4;
        const auto traj = evolve_grid_oracle(s, gs, {kappa, g});
        for (const auto& smp : traj.samples) {
            const double mu = 4.0 + kappa + g / (2 * pi) * 25.0;
            CHECK(std::abs(smp.state.at(Ring::upper, 2) - 5.0 * std::exp(-I * mu * smp.tau())) < 1e-9);
            for (int m = -4; m <= 4; ++m)
                if (m != 2) CHECK(std::abs(smp.state.at(Ring::upper, m)) < 1e-12);
        }
    }
    SUBCASE("fig2b configuration") {
        const auto cfg = config(3.2);
        const auto s0 = init_state(cfg);
        const auto model = model_for(cfg, s0);
        const auto a = evolve(s0, cfg.integrator(), model);
        const auto b = evolve_grid_oracle(s0, {}, model);
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, max_diff(a.samples[i].state, b.samples[i].state));
        CHECK(d < 1e-6);
    }
    CHECK_THROWS(evolve_grid_oracle(random_state(15, 1), GridOracleSettings{32, 1e-3, 0.1, 1.0}, {1.0, 0.1}));
}

TEST_CASE("onset time estimate") {
    CHECK(tau_osc_estimate(1e-4, 1.744) == Approx(18.42 / 1.744).epsilon(1e-3));
    CHECK(tau_osc_estimate(1e-4, 4.0) == Approx(4.605).epsilon(1e-3));
    CHECK(tau_osc_estimate(1e-2, 4.0) == Approx(0.5 * tau_osc_estimate(1e-4, 4.0)).epsilon(1e-12));
    CHECK_THROWS_WITH(tau_osc_estimate(1e-4, 0.0), "mode stable, no onset");
    CHECK(tau_osc_estimate(config(2.1), omega_minus(2, 2.0, 2.1).growth_rate()) == Approx(10.565).epsilon(1e-3));
}

TEST_CASE("truncation insensitivity") {
    RunConfig c;
    c.epsilon = 2.0;
    c.kappa = 2.1;
    c.integrator.t_end = 16.0;
    const auto cfg15 = validate_config(c);
    c.m_max = 20;
    const auto cfg20 = validate_config(c);
    const auto a0 = init_state(cfg15), b0 = init_state(cfg20);
    for (Ring r : {Ring::upper, Ring::lower})
        for (int m = -15; m <= 15; ++m) REQUIRE(a0.at(r, m) == b0.at(r, m));
    const auto a = evolve(a0, cfg15.integrator(), model_for(cfg15, a0));
    const auto b = evolve(b0, cfg20.integrator(), model_for(cfg20, b0));
    const auto oa = detect_onset(a), ob = detect_onset(b);
    REQUIRE(oa.reached);
    REQUIRE(ob.reached);
    CHECK(ob.tau_osc == Approx(oa.tau_osc).epsilon(0.01));
    double worst = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < a.size() && a.samples[i].tau() <= oa.tau_osc + 2.0; ++i) {
        worst = std::max(worst, std::abs(imbalance(a.samples[i].state) - imbalance(b.samples[i].state)));
        peak = std::max(peak, std::abs(imbalance(a.samples[i].state)));
    }
    CHECK(worst < 0.01 * peak);
}

TEST_CASE("settings errors") {
    const auto s = stationary_state(1.0, StackParity::symmetric, 0.0, 3);
    auto set = until(1.0);
    set.rel_tol = set.abs_tol = 1e-30;
    set.min_step = 1e-3;
    CHECK_THROWS_AS(evolve(random_state(3, 2, 10.0), set, {1.0, 5.0}), IntegrationError);
    CHECK_THROWS(integrate_to(s, -1.0, until(1.0), {1.0, 0.1}));
}
