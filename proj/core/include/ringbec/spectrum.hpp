#pragma once

#include <array>
#include <span>
#include <vector>

#include "ringbec/types.hpp"

namespace ringbec {

/// Stationary m = 0 state the fluctuations are taken around:
/// symmetric (alpha_u = alpha_d, mu = eps + kappa) or antisymmetric
/// (alpha_u = -alpha_d, mu = eps - kappa).
enum class StackParity { symmetric, antisymmetric };

/// A Bogoliubov frequency held through its square, which is always real.
/// Negative squares are purely imaginary frequencies; zero counts as real.
struct BranchFrequency {
    double squared = 0.0;

    bool is_real() const noexcept { return squared >= 0.0; }
    double magnitude() const;
    cplx value() const;
    /// Population growth rate 2 Im(omega); exactly 0 for real omega.
    double growth_rate() const;
};

struct SpectrumResult {
    int m = 0;
    double omega_plus = 0.0;
    BranchFrequency omega_minus;
    double growth_rate = 0.0;
    double lz_plus = 0.0;
    StackParity parity = StackParity::symmetric;
};

struct KappaWindow {
    double low = 0.0;
    double high = 0.0;
    /// Strict inclusion: the window edges themselves are stable.
    bool contains(double kappa) const noexcept { return kappa > low && kappa < high; }
    bool overlaps(const KappaWindow& o) const noexcept { return low < o.high && o.low < high; }
};

struct MaxGrowth {
    double kappa_star = 0.0;
    double gamma_max = 0.0;
};

struct BogoliubovEigen {
    /// Eigenvalues of the linearized system, ordered by (real, imag).
    std::array<cplx, 4> eigenvalues{};
    /// eigenvectors[k] = (u_m^u, u_m^d, v_-m^u, v_-m^d) for eigenvalues[k].
    std::array<std::array<cplx, 4>, 4> eigenvectors{};
    /// Number of eigenvalues replaced by their cluster mean because they
    /// sat on an exceptional (defective) point.
    int clustered = 0;
};

/// Upper branch sqrt(m^4 + 2 eps m^2); independent of kappa.
double omega_plus(int m, double epsilon);

/// Lower branch; its square (m^2 + eps - 2 kappa)^2 - eps^2 is evaluated in
/// factored form so window edges give an exact zero.
BranchFrequency omega_minus(int m, double epsilon, double kappa);

SpectrumResult spectrum_at(int m, double epsilon, double kappa);

/// Coupling range (m^2/2, m^2/2 + eps) in which mode m is unstable.
KappaWindow instability_window(int m, double epsilon);

/// Coupling of fastest growth and the universal maximum rate 2 eps.
MaxGrowth max_growth(int m, double epsilon);

/// <L_z> per particle in one ring for an omega_+ excitation, in units of hbar.
double lz_plus_per_particle(int m, double epsilon);

/// Numerically diagonalizes the 4x4 linearized system coupling
/// (u_m^u, u_m^d, v_-m^u, v_-m^d) around the chosen stationary state.
BogoliubovEigen bogoliubov_eigensolve(int m, double epsilon, double kappa,
                                      StackParity parity = StackParity::symmetric, double theta = 0.0);

/// The 4x4 matrix diagonalized by bogoliubov_eigensolve, row-major.
std::array<std::array<cplx, 4>, 4> bogoliubov_matrix(int m, double epsilon, double kappa, StackParity parity,
                                                     double theta);

/// Ring-resolved <L_z> carried by one eigenvector, normalized by the total
/// quasiparticle weight over both rings.
double lz_from_eigenvector(int m, const std::array<cplx, 4>& vec, Ring ring);

struct ChartRow {
    double kappa;
    int m;
    double re_omega_minus;
    double im_omega_minus;
    double growth_rate;
};

std::vector<ChartRow> stability_chart(double epsilon, std::span<const double> kappa_grid,
                                      std::span<const int> m_list);

}  // namespace ringbec
