#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ringbec/types.hpp"

namespace ringbec {

/// Phase attached to J_|m|(kR) alpha_m exp(i m zeta) in the momentum amplitude.
///
/// jacobi_anger: (-i)^|m|, the exact Fourier transform of the thin ring
///               (kernel exp(-i k.r)).
/// printed:      (-1)^(m/2) for even m, -(-1)^((m-1)/2) for odd m.
enum class PhaseConvention { jacobi_anger, printed };

const char* convention_name(PhaseConvention c);
PhaseConvention parse_convention(const std::string& name);

/// Momentum amplitude of one ring in the thin-ring limit,
/// Psi(k) = sum_m c_m J_|m|(k R) alpha_m exp(i m zeta).
cplx psi_k(std::span<const cplx> alpha, double r_ring, double k, double zeta,
           PhaseConvention convention = PhaseConvention::jacobi_anger);

/// The same amplitude by trapezoidal quadrature of
/// (1/2pi) int dphi exp(-i k R cos(phi - zeta)) sum_m alpha_m exp(i m phi),
/// doubling the node count until two estimates agree to tol. Throws
/// std::runtime_error if that fails by 2^16 nodes.
cplx psi_k_oracle(std::span<const cplx> alpha, double r_ring, double k, double zeta, double tol = 1e-13);

/// Intensity |Psi|^2 on a Cartesian (k_x, k_y) grid, normalized to unit maximum.
/// Row j holds k_y = ky[j]; intensity[j * resolution + i] is at (kx[i], ky[j]).
struct TofImage {
    int resolution = 0;
    double k_max = 0.0;
    PhaseConvention convention = PhaseConvention::jacobi_anger;
    std::vector<double> kx;
    std::vector<double> ky;
    std::vector<double> intensity;

    double at(int i, int j) const { return intensity[static_cast<std::size_t>(j) * resolution + i]; }
};

/// k_max in units of 1/R (the ring radius is 1 in scaled units).
TofImage tof_image(const ModeState& state, Ring ring, double k_max, int resolution,
                   PhaseConvention convention = PhaseConvention::jacobi_anger, int threads = 1);

/// CSV with columns kx, ky, intensity.
void write_tof_csv(const std::filesystem::path& path, const TofImage& image);

/// Binary 16-bit PGM (P5, maxval 65535, big-endian), largest k_y in the top row.
void write_tof_pgm(const std::filesystem::path& path, const TofImage& image);

}  // namespace ringbec
