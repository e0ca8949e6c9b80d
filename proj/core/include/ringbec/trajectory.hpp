#pragma once

#include <vector>

#include "ringbec/types.hpp"

namespace ringbec {

/// Parameters entering the mode equations. gamma is the actual interaction
/// constant, fixed from the initial total particle number.
struct CoupledRingModel {
    double kappa = 0.0;
    double gamma = 0.0;
};

struct ConservedQuantities {
    double norm = 0.0;
    double energy = 0.0;
    double lz_total = 0.0;  ///< sum_m m (N_m^u + N_m^d), in hbar
};

/// Largest deviations of the conserved quantities over a run: norm and
/// energy relative to their initial values, L_z per particle.
struct ConservationReport {
    double norm_drift = 0.0;
    double energy_drift = 0.0;
    double lz_drift = 0.0;
    bool flagged = false;
};

struct Sample {
    ModeState state;
    ConservedQuantities conserved;

    double tau() const noexcept { return state.tau(); }
};

struct IntegratorStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
};

/// Time-ordered samples of a run (strictly increasing tau).
struct Trajectory {
    std::vector<Sample> samples;
    CoupledRingModel model;
    ConservationReport conservation;
    IntegratorStats stats;

    bool empty() const noexcept { return samples.empty(); }
    const Sample& front() const { return samples.front(); }
    const Sample& back() const { return samples.back(); }
    std::size_t size() const noexcept { return samples.size(); }
};

/// Fills t.conservation from the recorded samples against the given bounds.
void assess_conservation(Trajectory& t, const IntegratorSettings& bounds);

}  // namespace ringbec
