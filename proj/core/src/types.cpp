#include "ringbec/types.hpp"

#include <cmath>
#include <sstream>

namespace ringbec {

const char* ring_name(Ring r) { return r == Ring::upper ? "u" : "d"; }

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& e : errors) os << "\n  " << e.field << ": " << e.message;
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::invalid_argument(join_errors(errors)), errors_(std::move(errors)) {}

ModeState::ModeState(int m_max, double tau)
    : m_max_(m_max), tau_(tau), alpha_u_(2 * m_max + 1), alpha_d_(2 * m_max + 1) {
    if (m_max < 1) throw std::invalid_argument("ModeState: m_max must be >= 1");
}

ModeState::ModeState(int m_max, double tau, std::vector<cplx> alpha_u, std::vector<cplx> alpha_d)
    : m_max_(m_max), tau_(tau), alpha_u_(std::move(alpha_u)), alpha_d_(std::move(alpha_d)) {
    if (m_max < 1) throw std::invalid_argument("ModeState: m_max must be >= 1");
    const auto n = static_cast<std::size_t>(2 * m_max + 1);
    if (alpha_u_.size() != n || alpha_d_.size() != n)
        throw std::invalid_argument("ModeState: amplitude arrays must have length 2*m_max+1");
}

std::size_t ModeState::offset(int m) const {
    if (!contains(m)) throw std::out_of_range("ModeState: mode index outside [-m_max, m_max]");
    return static_cast<std::size_t>(m + m_max_);
}

int ModeState::mode_at(std::size_t offset) const {
    if (offset >= static_cast<std::size_t>(size())) throw std::out_of_range("ModeState: offset");
    return static_cast<int>(offset) - m_max_;
}

double ModeState::total_norm() const {
    double n = 0.0;
    for (const auto& a : alpha_u_) n += std::norm(a);
    for (const auto& a : alpha_d_) n += std::norm(a);
    return n;
}

void ModeState::check() const {
    for (const auto* v : {&alpha_u_, &alpha_d_})
        for (const auto& a : *v)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw std::domain_error("ModeState: non-finite amplitude");
    const double n = total_norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error("ModeState: total norm must be finite and positive");
}

const char* method_name(IntegratorSettings::Method m) {
    return m == IntegratorSettings::Method::rk4 ? "rk4" : "adaptive";
}

void IntegratorSettings::check() const {
    std::vector<FieldError> errs;
    if (!(dt > 0)) errs.push_back({"integrator.dt", "must be > 0"});
    if (!(rel_tol > 0)) errs.push_back({"integrator.rel_tol", "must be > 0"});
    if (!(abs_tol > 0)) errs.push_back({"integrator.abs_tol", "must be > 0"});
    if (!(sample_interval > 0)) errs.push_back({"integrator.sample_interval", "must be > 0"});
    if (method == Method::rk4 && sample_interval < dt)
        errs.push_back({"integrator.sample_interval", "must be >= dt"});
    if (!(t_end >= 0)) errs.push_back({"integrator.t_end", "must be >= 0"});
    if (!(min_step > 0)) errs.push_back({"integrator.min_step", "must be > 0"});
    if (!errs.empty()) throw ConfigError(std::move(errs));
}

double derive_epsilon(double gamma, double n_tot) {
    if (gamma < 0) throw std::domain_error("attractive interaction unsupported");
    if (!(n_tot > 0)) throw std::domain_error("derive_epsilon: particle number must be positive");
    return gamma * n_tot / (4.0 * pi);
}

double gamma_for_epsilon(double epsilon, double n_tot) {
    if (epsilon < 0) throw std::domain_error("attractive interaction unsupported");
    if (!(n_tot > 0)) throw std::domain_error("gamma_for_epsilon: particle number must be positive");
    return 4.0 * pi * epsilon / n_tot;
}

CheckedConfig validate_config(const RunConfig& in) {
    std::vector<FieldError> errs;
    auto finite = [&](const char* name, double v) {
        if (!std::isfinite(v)) errs.push_back({name, "must be finite"});
    };

    finite("kappa", in.kappa);
    if (!(in.n0 > 0) || !std::isfinite(in.n0)) errs.push_back({"n0", "must be finite and > 0"});
    if (in.m_max < 1) errs.push_back({"m_max", "must be >= 1"});
    if (in.seed_mode_cutoff < 0) errs.push_back({"seed_mode_cutoff", "must be >= 0"});
    if (in.seed_mode_cutoff > in.m_max)
        errs.push_back({"seed_mode_cutoff", "exceeds truncation m_max"});
    if (!(in.seed_magnitude >= 0) || !std::isfinite(in.seed_magnitude))
        errs.push_back({"seed_magnitude", "must be finite and >= 0"});
    if (in.fluctuation_scale && (!(*in.fluctuation_scale >= 0) || !std::isfinite(*in.fluctuation_scale)))
        errs.push_back({"fluctuation_scale", "must be finite and >= 0"});

    double eps = 0.0, gam = 0.0;
    const double n_tot = 2.0 * in.n0;
    if (!in.epsilon && !in.gamma) {
        errs.push_back({"epsilon", "either epsilon or gamma must be given"});
    }
    if (in.epsilon) {
        finite("epsilon", *in.epsilon);
        if (*in.epsilon < 0) errs.push_back({"epsilon", "attractive interaction unsupported (epsilon < 0)"});
    }
    if (in.gamma) {
        finite("gamma", *in.gamma);
        if (*in.gamma < 0) errs.push_back({"gamma", "attractive interaction unsupported (gamma < 0)"});
    }
    if (errs.empty()) {
        if (in.epsilon) {
            eps = *in.epsilon;
            gam = gamma_for_epsilon(eps, n_tot);
            if (in.gamma) {
                const double derived = derive_epsilon(*in.gamma, n_tot);
                const double scale = std::max(std::abs(eps), std::abs(derived));
                if (std::abs(derived - eps) > 1e-12 * scale)
                    errs.push_back({"gamma", "inconsistent with epsilon for the given n0"});
                gam = *in.gamma;
            }
        } else {
            gam = *in.gamma;
            eps = derive_epsilon(gam, n_tot);
        }
    }

    try {
        in.integrator.check();
    } catch (const ConfigError& e) {
        errs.insert(errs.end(), e.errors().begin(), e.errors().end());
    }

    if (!errs.empty()) throw ConfigError(std::move(errs));

    CheckedConfig c;
    c.epsilon_ = eps;
    c.gamma_ = gam;
    c.kappa_ = in.kappa;
    c.n0_ = in.n0;
    c.m_max_ = in.m_max;
    c.seed_magnitude_ = in.seed_magnitude;
    c.seed_mode_cutoff_ = in.seed_mode_cutoff;
    c.fluctuation_scale_ = in.fluctuation_scale.value_or(std::sqrt(in.n0));
    c.rng_seed_ = in.rng_seed;
    c.integrator_ = in.integrator;
    return c;
}

RunConfig CheckedConfig::to_run_config() const {
    RunConfig r;
    r.epsilon = epsilon_;
    r.gamma = gamma_;
    r.kappa = kappa_;
    r.n0 = n0_;
    r.m_max = m_max_;
    r.seed_magnitude = seed_magnitude_;
    r.seed_mode_cutoff = seed_mode_cutoff_;
    r.fluctuation_scale = fluctuation_scale_;
    r.rng_seed = rng_seed_;
    r.integrator = integrator_;
    return r;
}

}  // namespace ringbec
