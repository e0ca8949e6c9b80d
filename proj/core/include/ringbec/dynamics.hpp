#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ringbec/rng.hpp"
#include "ringbec/spectrum.hpp"
#include "ringbec/trajectory.hpp"
#include "ringbec/types.hpp"

namespace ringbec {

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Model parameters for a prepared initial state: gamma = 4 pi eps / N_tot
/// with N_tot the state's actual particle number.
CoupledRingModel model_for(const CheckedConfig& config, const ModeState& initial);

/// Stationary m = 0 state with n0 particles per ring. Under the evolution
/// it only acquires the phase exp(-i mu tau), mu = eps +/- kappa.
ModeState stationary_state(double n0, StackParity parity, double theta, int m_max);

/// Initial condition: m = 0 amplitudes sqrt(n0 + delta) with Gaussian
/// delta per ring, plus seeds of size seed_magnitude * sqrt(n0) and uniform
/// random phase in every mode 1 <= |m| <= seed_mode_cutoff of both rings.
ModeState init_state(const CheckedConfig& config, RngStream& rng);
ModeState init_state(const CheckedConfig& config);

/// d alpha / d tau for the truncated mode equations
///   i d_tau a_m = m^2 a_m + kappa b_m + (gamma / 2 pi) sum_{n,n'} a_n a*_n' a_{m-n+n'}
/// with b the other ring; convolution terms leaving [-m_max, m_max] are dropped.
ModeState rhs_modes(const ModeState& state, const CoupledRingModel& model);

/// Reference O(M^3) evaluation of sum_{n,n'} a_n a*_n' a_{m-n+n'} on one ring.
std::vector<cplx> nonlinear_direct(std::span<const cplx> alpha);

/// Same convolution through a zero-padded DFT.
std::vector<cplx> nonlinear_fft(std::span<const cplx> alpha);

/// Hamiltonian generating the mode equations.
double energy(const ModeState& state, const CoupledRingModel& model);
ConservedQuantities conserved_quantities(const ModeState& state, const CoupledRingModel& model);

/// Integrates from state.tau() to settings.t_end, recording samples at
/// multiples of settings.sample_interval (and at t_end). Throws
/// IntegrationError on step-size underflow; drift beyond the configured
/// bounds sets conservation.flagged.
Trajectory evolve(const ModeState& state, const IntegratorSettings& settings, const CoupledRingModel& model);

/// Integrates to the single time tau_target, without sampling.
ModeState integrate_to(const ModeState& state, double tau_target, const IntegratorSettings& settings,
                       const CoupledRingModel& model);

struct GridOracleSettings {
    int grid_size = 256;
    double dt = 1e-3;
    double sample_interval = 0.05;
    double t_end = 10.0;
};

/// Independent check of evolve(): Yoshida-composed split-step integration of
/// the ring fields chi_u, chi_d on a periodic grid (kinetic and tunnel
/// coupling exact in mode space, nonlinear phase exact on the grid). Modes
/// beyond m_max are removed at every linear substep so both integrators solve
/// the same truncated system; that projection makes the scheme first order
/// in dt.
Trajectory evolve_grid_oracle(const ModeState& state, const GridOracleSettings& settings,
                              const CoupledRingModel& model);

/// Rough onset time ln(seed_magnitude^-2) / growth_rate, from
/// n0 ~ |alpha_m(0)|^2 exp(growth_rate tau).
double tau_osc_estimate(double seed_magnitude, double growth_rate);
double tau_osc_estimate(const CheckedConfig& config, double growth_rate);

}  // namespace ringbec
