#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ringbec::units {

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double k_B = 1.380649e-23;              // J / K
inline constexpr double atomic_mass = 1.66053906660e-27;  // kg
inline constexpr double mass_rb87 = 86.909180527 * atomic_mass;

/// Tabulated axial potential V(z) in joules on increasing z (metres).
struct AxialPotential {
    std::vector<double> z;
    std::vector<double> v;
};

struct PhysicalParams {
    double atom_mass = mass_rb87;
    double scattering_length = 5.2e-9;
    double a_rho = 0.3e-6;
    double a_z = 0.5e-6;
    double ring_radius = 1.2e-6;
    std::optional<double> z0;  ///< half distance between the axial wells
    std::optional<AxialPotential> axial_potential;
};

/// Throws ConfigError listing every non-positive length or mass.
void check(const PhysicalParams& p);

/// Notes where a_rho or a_z is not small against R (thin-ring limit).
std::vector<std::string> validity_warnings(const PhysicalParams& p);

struct Scales {
    double E0;    ///< hbar^2 / (2 M R^2), J
    double tau0;  ///< 2 M R^2 / hbar, s
};

Scales scales(const PhysicalParams& p);

/// gamma = 4 R^2 a / (a_rho^2 sqrt(2 pi) a_z) for a Gaussian axial profile.
double gamma_eff(const PhysicalParams& p);

/// N0 = 2 pi eps / gamma. Throws std::domain_error for gamma <= 0.
double n0_for_epsilon(double epsilon, double gamma);

enum class EnergyReference {
    as_given,  ///< the overlap integral exactly as defined, with V as tabulated
    on_site,   ///< subtract S <Phi_R|H|Phi_R>, removing the dependence on the zero of V
};

struct KappaOptions {
    EnergyReference reference = EnergyReference::as_given;
    /// Maximum relative change between the quadrature on the full grid and
    /// on every second node.
    double refinement_tol = 1e-5;
};

/// kappa = -R^2 int dz Phi(z + z0) [d^2/dz^2 - (2M/hbar^2) V(z)] Phi(z - z0)
/// with Phi the normalized Gaussian of width a_z, by trapezoidal quadrature
/// on the nodes of the tabulated potential. Requires axial_potential
/// covering [-z0 - 8 a_z, z0 + 8 a_z]; z0 defaults to 0.
double kappa_from_potential(const PhysicalParams& p, const KappaOptions& options = {});

/// V(z) = (1/2) M w^2 (|z| - z0)^2 with hbar / (M w) = a_z^2: two harmonic
/// wells whose ground states are the Gaussians used for Phi.
AxialPotential double_harmonic_well(const PhysicalParams& p, double z0, double half_width, int points);

/// Single harmonic well of oscillator length a_z centred at 0.
AxialPotential harmonic_well(const PhysicalParams& p, double half_width, int points);

}  // namespace ringbec::units
