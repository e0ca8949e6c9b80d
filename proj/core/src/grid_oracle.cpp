#include <algorithm>
#include <cmath>
#include <vector>

#include "fourier.hpp"
#include "mode_grid.hpp"
#include "ringbec/dynamics.hpp"

namespace ringbec {

namespace {

using detail::FftBuffer;
using detail::fft_index;

constexpr cplx I{0.0, 1.0};

class SplitStep {
public:
    SplitStep(const ModeState& s, int n, const CoupledRingModel& model)
        : N_(n), m_max_(s.m_max()), model_(model), u_(n), d_(n) {
        detail::to_grid(s.ring(Ring::upper).data(), m_max_, u_);
        detail::to_grid(s.ring(Ring::lower).data(), m_max_, d_);
    }

    /// One fourth-order step: Yoshida triple of Strang steps.
    void step(double h) {
        static const double cbrt2 = std::cbrt(2.0);
        static const double w1 = 1.0 / (2.0 - cbrt2);
        static const double w0 = -cbrt2 / (2.0 - cbrt2);
        strang(w1 * h);
        strang(w0 * h);
        strang(w1 * h);
    }

    /// Projection onto |m| <= m_max.
    void project(ModeState& out) {
        for (auto [buf, ring] : {std::pair{&u_, Ring::upper}, std::pair{&d_, Ring::lower}}) {
            std::vector<cplx> keep(buf->data().begin(), buf->data().end());
            buf->forward();
            auto a = out.ring(ring);
            for (int m = -m_max_; m <= m_max_; ++m)
                a[static_cast<std::size_t>(m + m_max_)] = (*buf)[fft_index(m, N_)] / static_cast<double>(N_);
            std::copy(keep.begin(), keep.end(), buf->data().begin());
        }
    }

private:
    void strang(double h) {
        linear(0.5 * h);
        nonlinear(h);
        linear(0.5 * h);
    }

    // Kinetic energy and tunnelling, exact per mode in momentum space.
    // Modes beyond m_max are dropped, as in the mode equations.
    void linear(double h) {
        u_.forward();
        d_.forward();
        const double c = std::cos(model_.kappa * h), sn = std::sin(model_.kappa * h);
        for (int k = 0; k < N_; ++k) {
            const int m = k <= N_ / 2 ? k : k - N_;
            if (std::abs(m) > m_max_) {
                u_[k] = d_[k] = 0.0;
                continue;
            }
            const cplx ph = std::polar(1.0 / N_, -double(m) * m * h);
            const cplx a = u_[k], b = d_[k];
            u_[k] = ph * (c * a - I * sn * b);
            d_[k] = ph * (c * b - I * sn * a);
        }
        u_.backward();
        d_.backward();
    }

    // |chi|^2 is invariant under its own flow, so the phase is exact.
    void nonlinear(double h) {
        const double g = model_.gamma / (2.0 * pi);
        for (auto* buf : {&u_, &d_})
            for (int j = 0; j < N_; ++j) (*buf)[j] *= std::polar(1.0, -g * std::norm((*buf)[j]) * h);
    }

    int N_;
    int m_max_;
    CoupledRingModel model_;
    FftBuffer u_, d_;
};

}  // namespace

Trajectory evolve_grid_oracle(const ModeState& state, const GridOracleSettings& settings,
                              const CoupledRingModel& model) {
    state.check();
    if (settings.grid_size < 4 * state.m_max() + 1)
        throw std::invalid_argument("evolve_grid_oracle: grid_size must be >= 4*m_max+1");
    if (!(settings.dt > 0.0) || !(settings.sample_interval > 0.0))
        throw std::invalid_argument("evolve_grid_oracle: dt and sample_interval must be > 0");
    if (settings.t_end < state.tau()) throw std::invalid_argument("evolve_grid_oracle: t_end precedes the initial time");

    Trajectory traj;
    traj.model = model;
    traj.samples.push_back({state, conserved_quantities(state, model)});

    SplitStep stepper(state, settings.grid_size, model);
    ModeState cur = state;
    double t = state.tau();
    for (long k = 1; t < settings.t_end; ++k) {
        double target = state.tau() + static_cast<double>(k) * settings.sample_interval;
        if (target >= settings.t_end - 1e-9 * settings.sample_interval) target = settings.t_end;
        const double span = target - t;
        const long n = std::max(1L, static_cast<long>(std::ceil(span / settings.dt - 1e-9)));
        const double h = span / static_cast<double>(n);
        for (long i = 0; i < n; ++i) stepper.step(h);
        traj.stats.accepted += n;
        t = target;
        stepper.project(cur);
        cur.set_tau(t);
        traj.samples.push_back({cur, conserved_quantities(cur, model)});
    }
    IntegratorSettings bounds;
    assess_conservation(traj, bounds);
    return traj;
}

}  // namespace ringbec
