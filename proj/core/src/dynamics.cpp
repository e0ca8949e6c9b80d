#include "ringbec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fourier.hpp"
#include "mode_grid.hpp"

namespace ringbec {

namespace {

using detail::FftBuffer;

constexpr cplx I{0.0, 1.0};

/// The two rings stored back to back: y[i] is ring u, y[S + i] ring d.
struct Flat {
    int m_max;
    int S;
    std::vector<cplx> y;

    explicit Flat(const ModeState& s) : m_max(s.m_max()), S(s.size()), y(2 * static_cast<std::size_t>(S)) {
        auto u = s.ring(Ring::upper), d = s.ring(Ring::lower);
        std::copy(u.begin(), u.end(), y.begin());
        std::copy(d.begin(), d.end(), y.begin() + S);
    }

    void store(ModeState& s) const {
        auto u = s.ring(Ring::upper), d = s.ring(Ring::lower);
        std::copy(y.begin(), y.begin() + S, u.begin());
        std::copy(y.begin() + S, y.end(), d.begin());
    }
};

/// Exact propagator of the linear part (kinetic m^2 plus tunnel coupling)
/// over an interval s, applied in place.
class LinearPropagator {
public:
    LinearPropagator(int m_max, double kappa) : m_max_(m_max), kappa_(kappa) {}

    void apply(std::vector<cplx>& y, double s) const {
        const int S = 2 * m_max_ + 1;
        const double c = std::cos(kappa_ * s), sn = std::sin(kappa_ * s);
        for (int i = 0; i < S; ++i) {
            const double m = i - m_max_;
            const cplx ph = std::polar(1.0, -m * m * s);
            const cplx a = y[i], b = y[S + i];
            y[i] = ph * (c * a - I * sn * b);
            y[S + i] = ph * (c * b - I * sn * a);
        }
    }

private:
    int m_max_;
    double kappa_;
};

/// -i times the nonlinear term of both rings, in the interaction frame
/// anchored at the start of the current step.
class InteractionRhs {
public:
    InteractionRhs(int m_max, const CoupledRingModel& model)
        : m_max_(m_max), S_(2 * m_max + 1), prop_(m_max, model.kappa), nl_(m_max, model.gamma / (2.0 * pi)), tmp_(2 * S_) {}

    void operator()(double s, const std::vector<cplx>& beta, std::vector<cplx>& out) {
        tmp_ = beta;
        prop_.apply(tmp_, s);
        out.resize(tmp_.size());
        nl_.apply(&tmp_[0], &out[0]);
        nl_.apply(&tmp_[S_], &out[S_]);
        for (auto& v : out) v *= -I;
        prop_.apply(out, -s);
        ++evaluations;
    }

    const LinearPropagator& propagator() const { return prop_; }

    long evaluations = 0;

private:
    int m_max_;
    int S_;
    LinearPropagator prop_;
    detail::NonlinearTerm nl_;
    std::vector<cplx> tmp_;
};

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

class Stepper {
public:
    Stepper(const ModeState& s, const IntegratorSettings& set, const CoupledRingModel& model)
        : set_(set), flat_(s), rhs_(s.m_max(), model), t_(s.tau()), h_(set.dt) {
        const std::size_t n = flat_.y.size();
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &y5_}) v->assign(n, cplx{});
    }

    double tau() const { return t_; }

    /// Advances exactly to target.
    void advance_to(double target) {
        if (set_.method == IntegratorSettings::Method::rk4)
            advance_rk4(target);
        else
            advance_dp5(target);
    }

    void store(ModeState& s) const {
        flat_.store(s);
        s.set_tau(t_);
    }

    IntegratorStats stats() const {
        IntegratorStats st = stats_;
        st.rhs_evaluations = rhs_.evaluations;
        return st;
    }

private:
    void advance_rk4(double target) {
        auto& y = flat_.y;
        const std::size_t n = y.size();
        while (t_ < target) {
            const double remaining = target - t_;
            const bool land = set_.dt >= remaining * (1.0 - 1e-12);
            const double h = land ? remaining : set_.dt;
            rhs_(0.0, y, k1_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
            rhs_(0.5 * h, tmp_, k2_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
            rhs_(0.5 * h, tmp_, k3_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
            rhs_(h, tmp_, k4_);
            for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
            rhs_.propagator().apply(y, h);
            t_ = land ? target : t_ + h;
            ++stats_.accepted;
            check_finite();
        }
    }

    void advance_dp5(double target) {
        auto& y = flat_.y;
        const std::size_t n = y.size();
        while (t_ < target) {
            if (!have_k1_) {
                rhs_(0.0, y, k1_);
                have_k1_ = true;
            }
            const double remaining = target - t_;
            const bool land = h_ >= remaining * (1.0 - 1e-12);
            const double h = land ? remaining : h_;

            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
            rhs_(c2 * h, tmp_, k2_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
            rhs_(c3 * h, tmp_, k3_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
            rhs_(c4 * h, tmp_, k4_);
            for (std::size_t i = 0; i < n; ++i)
                tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
            rhs_(c5 * h, tmp_, k5_);
            for (std::size_t i = 0; i < n; ++i)
                tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
            rhs_(h, tmp_, k6_);
            for (std::size_t i = 0; i < n; ++i)
                y5_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
            rhs_(h, y5_, k7_);

            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const cplx e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
                const double sc = set_.abs_tol + set_.rel_tol * std::max(std::abs(y[i]), std::abs(y5_[i]));
                acc += std::norm(e) / (sc * sc);
            }
            const double err = std::sqrt(acc / static_cast<double>(n));
            if (!std::isfinite(err)) throw IntegrationError("evolve: non-finite amplitudes");

            if (err <= 1.0) {
                const auto& prop = rhs_.propagator();
                y.swap(y5_);
                prop.apply(y, h);
                // First-same-as-last: k7 is the derivative at the new point,
                // expressed in the old frame.
                k1_.swap(k7_);
                prop.apply(k1_, h);
                t_ = land ? target : t_ + h;
                ++stats_.accepted;
                const double fac = err == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0);
                // A step shortened to land on a sample does not shrink the next one.
                h_ = land ? std::max(h_, h * fac) : h * fac;
            } else {
                ++stats_.rejected;
                h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
                if (h_ < set_.min_step)
                    throw IntegrationError("evolve: step size underflow at tau = " + std::to_string(t_));
            }
        }
    }

    void check_finite() const {
        for (const auto& v : flat_.y)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw IntegrationError("evolve: non-finite amplitudes");
    }

    IntegratorSettings set_;
    Flat flat_;
    InteractionRhs rhs_;
    double t_;
    double h_;
    bool have_k1_ = false;
    IntegratorStats stats_;
    std::vector<cplx> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y5_;
};

std::vector<double> sample_times(double t0, double t_end, double interval) {
    std::vector<double> out;
    for (long k = 1;; ++k) {
        const double t = t0 + static_cast<double>(k) * interval;
        if (t >= t_end - 1e-9 * interval) break;
        out.push_back(t);
    }
    if (t_end > t0) out.push_back(t_end);
    return out;
}

}  // namespace

namespace detail {

NonlinearTerm::NonlinearTerm(int m_max, double coefficient)
    : m_max_(m_max), coefficient_(coefficient), buf_(grid_size_for(m_max)) {}

int NonlinearTerm::grid_size_for(int m_max) {
    // Products of three modes reach |m| = 3 m_max; any N > 4 m_max keeps
    // their aliases off [-m_max, m_max].
    return next_pow2(4 * m_max + 2);
}

void NonlinearTerm::apply(const cplx* alpha, cplx* out) {
    const int N = buf_.size();
    to_grid(alpha, m_max_, buf_);
    for (int j = 0; j < N; ++j) buf_[j] *= std::norm(buf_[j]);
    buf_.forward();
    const double scale = coefficient_ / N;
    for (int m = -m_max_; m <= m_max_; ++m) out[m + m_max_] = scale * buf_[fft_index(m, N)];
}

void to_grid(const cplx* alpha, int m_max, FftBuffer& buf) {
    const int N = buf.size();
    auto d = buf.data();
    std::fill(d.begin(), d.end(), cplx{});
    for (int m = -m_max; m <= m_max; ++m) buf[fft_index(m, N)] = alpha[m + m_max];
    buf.backward();
}

}  // namespace detail

CoupledRingModel model_for(const CheckedConfig& config, const ModeState& initial) {
    return {config.kappa(), gamma_for_epsilon(config.epsilon(), initial.total_norm())};
}

ModeState stationary_state(double n0, StackParity parity, double theta, int m_max) {
    if (!(n0 > 0.0)) throw std::invalid_argument("stationary_state: n0 must be > 0");
    ModeState s(m_max);
    const cplx a = std::polar(std::sqrt(n0), theta);
    s.at(Ring::upper, 0) = a;
    s.at(Ring::lower, 0) = parity == StackParity::symmetric ? a : -a;
    return s;
}

ModeState init_state(const CheckedConfig& config, RngStream& rng) {
    const double n0 = config.n0();
    auto draw_population = [&](const char* ring) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double delta = config.fluctuation_scale() * rng.normal();
            if (n0 + delta > 0.0) return n0 + delta;
        }
        throw std::runtime_error(std::string("init_state: no positive population drawn for ring ") + ring);
    };

    ModeState s(config.m_max());
    s.at(Ring::upper, 0) = std::sqrt(draw_population("u"));
    s.at(Ring::lower, 0) = std::sqrt(draw_population("d"));

    const double amp = config.seed_magnitude() * std::sqrt(n0);
    for (Ring r : {Ring::upper, Ring::lower})
        for (int m = 1; m <= config.seed_mode_cutoff(); ++m)
            for (int sign : {+1, -1}) s.at(r, sign * m) = std::polar(amp, 2.0 * pi * rng.uniform());
    return s;
}

ModeState init_state(const CheckedConfig& config) {
    RngStream rng(config.rng_seed());
    return init_state(config, rng);
}

ModeState rhs_modes(const ModeState& state, const CoupledRingModel& model) {
    ModeState out(state.m_max(), state.tau());
    const int M = state.m_max();
    const double coef = model.gamma / (2.0 * pi);
    auto& buf = detail::thread_buffer(detail::NonlinearTerm::grid_size_for(M));
    const int N = buf.size();
    for (Ring r : {Ring::upper, Ring::lower}) {
        auto a = state.ring(r), b = state.ring(other(r));
        auto o = out.ring(r);
        detail::to_grid(a.data(), M, buf);
        for (int j = 0; j < N; ++j) buf[j] *= std::norm(buf[j]);
        buf.forward();
        for (int m = -M; m <= M; ++m) {
            const std::size_t k = static_cast<std::size_t>(m + M);
            const cplx nl = coef / N * buf[detail::fft_index(m, N)];
            o[k] = -I * (static_cast<double>(m) * m * a[k] + model.kappa * b[k] + nl);
        }
    }
    return out;
}

std::vector<cplx> nonlinear_direct(std::span<const cplx> alpha) {
    const int S = static_cast<int>(alpha.size());
    if (S % 2 == 0) throw std::invalid_argument("nonlinear_direct: length must be odd");
    const int M = S / 2;
    std::vector<cplx> out(alpha.size());
    for (int m = -M; m <= M; ++m) {
        cplx acc{};
        for (int n = -M; n <= M; ++n)
            for (int np = -M; np <= M; ++np) {
                const int k = m - n + np;
                if (k < -M || k > M) continue;
                acc += alpha[n + M] * std::conj(alpha[np + M]) * alpha[k + M];
            }
        out[m + M] = acc;
    }
    return out;
}

std::vector<cplx> nonlinear_fft(std::span<const cplx> alpha) {
    const int S = static_cast<int>(alpha.size());
    if (S % 2 == 0) throw std::invalid_argument("nonlinear_fft: length must be odd");
    const int M = S / 2;
    auto& buf = detail::thread_buffer(detail::NonlinearTerm::grid_size_for(M));
    const int N = buf.size();
    detail::to_grid(alpha.data(), M, buf);
    for (int j = 0; j < N; ++j) buf[j] *= std::norm(buf[j]);
    buf.forward();
    std::vector<cplx> out(alpha.size());
    for (int m = -M; m <= M; ++m) out[m + M] = buf[detail::fft_index(m, N)] / static_cast<double>(N);
    return out;
}

double energy(const ModeState& state, const CoupledRingModel& model) {
    const int M = state.m_max();
    auto& buf = detail::thread_buffer(detail::NonlinearTerm::grid_size_for(M));
    const int N = buf.size();
    auto u = state.ring(Ring::upper), d = state.ring(Ring::lower);
    double kinetic = 0.0, tunnel = 0.0, interaction = 0.0;
    for (int m = -M; m <= M; ++m) {
        const std::size_t k = static_cast<std::size_t>(m + M);
        kinetic += static_cast<double>(m) * m * (std::norm(u[k]) + std::norm(d[k]));
        tunnel += 2.0 * (std::conj(u[k]) * d[k]).real();
    }
    for (Ring r : {Ring::upper, Ring::lower}) {
        detail::to_grid(state.ring(r).data(), M, buf);
        double q = 0.0;
        for (int j = 0; j < N; ++j) q += std::norm(buf[j]) * std::norm(buf[j]);
        interaction += q / N;
    }
    return kinetic + model.kappa * tunnel + model.gamma / (4.0 * pi) * interaction;
}

ConservedQuantities conserved_quantities(const ModeState& state, const CoupledRingModel& model) {
    ConservedQuantities q;
    q.norm = state.total_norm();
    q.energy = energy(state, model);
    const int M = state.m_max();
    for (Ring r : {Ring::upper, Ring::lower}) {
        auto a = state.ring(r);
        for (int m = -M; m <= M; ++m) q.lz_total += m * std::norm(a[static_cast<std::size_t>(m + M)]);
    }
    return q;
}

void assess_conservation(Trajectory& t, const IntegratorSettings& bounds) {
    ConservationReport rep;
    if (!t.empty()) {
        const auto& c0 = t.front().conserved;
        // Energy is compared on the scale of the particle number, so a zero
        // initial energy does not turn round-off into a huge relative drift.
        const double e_scale = std::max(std::abs(c0.energy), c0.norm);
        for (const auto& s : t.samples) {
            const auto& c = s.conserved;
            rep.norm_drift = std::max(rep.norm_drift, std::abs(c.norm - c0.norm) / c0.norm);
            rep.energy_drift = std::max(rep.energy_drift, std::abs(c.energy - c0.energy) / e_scale);
            rep.lz_drift = std::max(rep.lz_drift, std::abs(c.lz_total - c0.lz_total) / c0.norm);
        }
    }
    rep.flagged = rep.norm_drift > bounds.max_norm_drift || rep.energy_drift > bounds.max_energy_drift ||
                  rep.lz_drift > bounds.max_lz_drift;
    t.conservation = rep;
}

Trajectory evolve(const ModeState& state, const IntegratorSettings& settings, const CoupledRingModel& model) {
    settings.check();
    state.check();
    if (settings.t_end < state.tau()) throw std::invalid_argument("evolve: t_end precedes the initial time");

    Trajectory traj;
    traj.model = model;
    traj.samples.push_back({state, conserved_quantities(state, model)});

    Stepper stepper(state, settings, model);
    ModeState cur = state;
    for (double t : sample_times(state.tau(), settings.t_end, settings.sample_interval)) {
        stepper.advance_to(t);
        stepper.store(cur);
        traj.samples.push_back({cur, conserved_quantities(cur, model)});
    }
    traj.stats = stepper.stats();
    assess_conservation(traj, settings);
    return traj;
}

ModeState integrate_to(const ModeState& state, double tau_target, const IntegratorSettings& settings,
                       const CoupledRingModel& model) {
    settings.check();
    state.check();
    if (tau_target < state.tau()) throw std::invalid_argument("integrate_to: target precedes the initial time");
    Stepper stepper(state, settings, model);
    stepper.advance_to(tau_target);
    ModeState out = state;
    stepper.store(out);
    return out;
}

double tau_osc_estimate(double seed_magnitude, double growth_rate) {
    if (!(growth_rate > 0.0)) throw std::domain_error("mode stable, no onset");
    if (!(seed_magnitude > 0.0 && seed_magnitude < 1.0))
        throw std::domain_error("tau_osc_estimate: seed magnitude must lie in (0, 1)");
    return std::log(1.0 / (seed_magnitude * seed_magnitude)) / growth_rate;
}

double tau_osc_estimate(const CheckedConfig& config, double growth_rate) {
    return tau_osc_estimate(config.seed_magnitude(), growth_rate);
}

}  // namespace ringbec
