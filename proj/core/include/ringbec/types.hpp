#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ringbec {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Which annulus: upper (u) or lower (d).
enum class Ring { upper, lower };

inline Ring other(Ring r) { return r == Ring::upper ? Ring::lower : Ring::upper; }
const char* ring_name(Ring r);

struct FieldError {
    std::string field;
    std::string message;
};

/// Raised when a configuration violates one or more invariants. Every
/// violation is reported, not just the first.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<FieldError> errors);
    ConfigError(std::string field, std::string message)
        : ConfigError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}
    const std::vector<FieldError>& errors() const noexcept { return errors_; }

private:
    std::vector<FieldError> errors_;
};

/// Complex angular-momentum amplitudes of both rings at scaled time tau.
///
/// Amplitudes are stored symmetric around m = 0: offset(m) = m + m_max.
/// Normalization is |alpha_m|^2 = N_m (particles in mode m).
class ModeState {
public:
    ModeState() = default;
    ModeState(int m_max, double tau = 0.0);
    ModeState(int m_max, double tau, std::vector<cplx> alpha_u, std::vector<cplx> alpha_d);

    int m_max() const noexcept { return m_max_; }
    int size() const noexcept { return 2 * m_max_ + 1; }
    double tau() const noexcept { return tau_; }
    void set_tau(double tau) noexcept { tau_ = tau; }

    std::size_t offset(int m) const;
    int mode_at(std::size_t offset) const;
    bool contains(int m) const noexcept { return m >= -m_max_ && m <= m_max_; }

    cplx& at(Ring r, int m) { return ring(r)[offset(m)]; }
    cplx at(Ring r, int m) const { return ring(r)[offset(m)]; }

    std::span<cplx> ring(Ring r) noexcept { return r == Ring::upper ? std::span{alpha_u_} : std::span{alpha_d_}; }
    std::span<const cplx> ring(Ring r) const noexcept {
        return r == Ring::upper ? std::span<const cplx>{alpha_u_} : std::span<const cplx>{alpha_d_};
    }

    double total_norm() const;

    /// Throws std::domain_error when an invariant is broken (non-finite
    /// amplitude or vanishing norm).
    void check() const;

    friend bool operator==(const ModeState&, const ModeState&) = default;

private:
    int m_max_ = 0;
    double tau_ = 0.0;
    std::vector<cplx> alpha_u_;
    std::vector<cplx> alpha_d_;
};

/// Controls for the mode-space time integrator.
struct IntegratorSettings {
    enum class Method { rk4, adaptive };

    Method method = Method::adaptive;
    double dt = 1e-3;  ///< fixed step for rk4, initial trial step for adaptive
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double sample_interval = 0.05;
    double t_end = 10.0;
    double min_step = 1e-12;

    // Bounds above which a run is flagged as not conserving.
    double max_norm_drift = 1e-8;
    double max_energy_drift = 1e-6;
    double max_lz_drift = 1e-8;

    void check() const;
};

const char* method_name(IntegratorSettings::Method m);

/// User-facing run parameters. Either epsilon or gamma (with n0) may be
/// supplied; validate_config() fills the other and the defaults.
struct RunConfig {
    std::optional<double> epsilon;
    std::optional<double> gamma;
    double kappa = 0.0;
    double n0 = 1e4;
    int m_max = 15;
    double seed_magnitude = 1e-4;  ///< seed amplitude in units of sqrt(n0)
    int seed_mode_cutoff = 5;
    std::optional<double> fluctuation_scale;  ///< std of particle-number fluctuation, default sqrt(n0)
    std::uint64_t rng_seed = 1;
    IntegratorSettings integrator;
};

/// A RunConfig whose invariants hold. Only validate_config() builds one.
class CheckedConfig {
public:
    double epsilon() const noexcept { return epsilon_; }
    /// Nominal gamma for two rings of n0 particles each.
    double gamma() const noexcept { return gamma_; }
    double kappa() const noexcept { return kappa_; }
    double n0() const noexcept { return n0_; }
    int m_max() const noexcept { return m_max_; }
    double seed_magnitude() const noexcept { return seed_magnitude_; }
    int seed_mode_cutoff() const noexcept { return seed_mode_cutoff_; }
    double fluctuation_scale() const noexcept { return fluctuation_scale_; }
    std::uint64_t rng_seed() const noexcept { return rng_seed_; }
    const IntegratorSettings& integrator() const noexcept { return integrator_; }

    CheckedConfig with_seed(std::uint64_t seed) const {
        CheckedConfig c = *this;
        c.rng_seed_ = seed;
        return c;
    }

    /// Fully specified RunConfig equivalent (both epsilon and gamma set).
    RunConfig to_run_config() const;

private:
    friend CheckedConfig validate_config(const RunConfig&);
    CheckedConfig() = default;

    double epsilon_ = 0, gamma_ = 0, kappa_ = 0, n0_ = 0;
    int m_max_ = 0;
    double seed_magnitude_ = 0;
    int seed_mode_cutoff_ = 0;
    double fluctuation_scale_ = 0;
    std::uint64_t rng_seed_ = 0;
    IntegratorSettings integrator_;
};

/// Nonlinear energy from the interaction constant and the total particle
/// number of both rings: eps = gamma * n_tot / (4 pi).
double derive_epsilon(double gamma, double n_tot);

/// Interaction constant giving nonlinear energy eps for n_tot particles.
double gamma_for_epsilon(double epsilon, double n_tot);

CheckedConfig validate_config(const RunConfig& config);

}  // namespace ringbec
