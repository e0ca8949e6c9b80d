#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library except for plain data types.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ringbec/types.hpp"
#include "ringbec/units.hpp"

namespace oracle {

using ringbec::cplx;

/// J_n(x) from (1/2pi) \int_0^{2pi} cos(n t - x sin t) dt, periodic trapezoid
/// with node doubling until converged.
double bessel_quadrature(int n, double x);

/// Eigenfrequencies {+w_plus, -w_plus, +w_minus, -w_minus} by direct substitution.
std::array<cplx, 4> branch_frequencies(int m, double epsilon, double kappa);

/// Largest elementwise distance under the best pairing of two 4-element multisets.
double multiset_distance(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b);

/// Maximiser of a unimodal f on [a, b] by bisection on sign(f(x+h) - f(x-h)).
/// Unlike comparing values near the peak this resolves the argmax well below
/// sqrt(machine epsilon).
double argmax_bisect(const std::function<double(double)>& f, double a, double b, double h = 1e-6);

/// Exact evolution of the linear (gamma = 0) mode equations.
ringbec::ModeState rabi_solution(const ringbec::ModeState& s0, double kappa, double tau);

/// Triple sum \sum_{n,n'} a_n conj(a_n') a_{m-n+n'} restricted to |.| <= m_max.
std::vector<cplx> cubic_convolution(std::span<const cplx> alpha);

/// Far-field amplitude (1/2pi) \int dphi exp(-i k R cos(phi - zeta)) \sum_m a_m exp(i m phi).
cplx tof_quadrature(std::span<const cplx> alpha, double r_ring, double k, double zeta);

/// Two lowest eigenvalues (J) of -hbar^2/2M d^2/dz^2 + V(z) with Dirichlet ends,
/// second-order finite differences on a uniform grid.
std::array<double, 2> axial_levels(const ringbec::units::AxialPotential& v, double mass);

}  // namespace oracle
