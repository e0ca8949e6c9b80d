#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ringbec/trajectory.hpp"
#include "ringbec/types.hpp"

namespace ringbec {

struct Occupations {
    int m_max = 0;
    std::vector<double> upper;  ///< N_m^u at offset m + m_max
    std::vector<double> lower;
    double n_u = 0.0;
    double n_d = 0.0;

    double at(Ring r, int m) const;
    double total() const noexcept { return n_u + n_d; }
};

Occupations occupations(const ModeState& state);

struct AngularMomentum {
    double lz_u = 0.0;  ///< per particle, units of hbar
    double lz_d = 0.0;
};

/// Throws std::domain_error if either ring is empty.
AngularMomentum angular_momentum(const ModeState& state);

/// <L_z> per particle of one ring from its occupations; throws
/// std::domain_error if the ring is empty.
double angular_momentum_ring(const Occupations& occ, Ring ring);

/// (N^d - N^u) / N_tot.
double imbalance(const ModeState& state);

struct GrowthFitOptions {
    /// Explicit fit window; by default the span where the population lies in
    /// [10 N(0), 1e-3 N0], N0 = N_tot(0) / 2.
    std::optional<std::pair<double, double>> window;
    /// Fit the pair population N_m + N_-m instead of N_m alone.
    bool pair = true;
    Ring ring = Ring::upper;
    /// Saturation is flagged when the log-slope changes across the window by
    /// more than this fraction of max(|slope|, 1).
    double curvature_threshold = 0.1;
};

struct GrowthFit {
    double rate = 0.0;       ///< slope of ln N(tau)
    double intercept = 0.0;
    double residual = 0.0;   ///< RMS residual of ln N
    double tau_a = 0.0;
    double tau_b = 0.0;
    int points = 0;
    double slope_change = 0.0;
    bool saturated = false;
};

/// Least-squares slope of ln N_m(tau). Throws std::domain_error when the
/// window holds fewer than three samples or a non-positive population.
GrowthFit fit_growth_rate(const Trajectory& trajectory, int m, const GrowthFitOptions& options = {});

/// Same fit on raw (tau, N) data.
GrowthFit fit_growth_rate(const std::vector<double>& tau, const std::vector<double>& population,
                          double curvature_threshold = 0.1);

struct OnsetReport {
    bool reached = false;
    double tau_osc = 0.0;        ///< first tau with |imbalance| > threshold; NaN if not reached
    std::size_t index = 0;       ///< sample index of the crossing
    double max_imbalance = 0.0;  ///< max |imbalance| from the onset on (whole run if not reached)
    double lz_amplitude = 0.0;   ///< peak |<L_z^u/d>| from the onset on
    /// Angular frequency of the imbalance before the onset (whole run if not
    /// reached), from mean-crossing spacing; NaN with fewer than two crossings.
    double josephson_frequency = 0.0;
};

OnsetReport detect_onset(const Trajectory& trajectory, double imbalance_threshold = 0.1);

}  // namespace ringbec
