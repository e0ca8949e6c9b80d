#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace oracle {

namespace {
constexpr double two_pi = 2.0 * ringbec::pi;
}

double bessel_quadrature(int n, double x) {
    auto sum = [&](int nodes) {
        double s = 0.0;
        for (int j = 0; j < nodes; ++j) {
            const double t = two_pi * j / nodes;
            s += std::cos(n * t - x * std::sin(t));
        }
        return s / nodes;
    };
    int nodes = 64;
    double prev = sum(nodes);
    for (nodes *= 2; nodes <= (1 << 20); nodes *= 2) {
        const double cur = sum(nodes);
        if (std::abs(cur - prev) < 1e-15) return cur;
        prev = cur;
    }
    return prev;
}

std::array<cplx, 4> branch_frequencies(int m, double epsilon, double kappa) {
    const double m2 = double(m) * m;
    const double plus = std::sqrt(std::max(0.0, (m2 + epsilon) * (m2 + epsilon) - epsilon * epsilon));
    const cplx minus = std::sqrt(cplx((m2 + epsilon - 2 * kappa) * (m2 + epsilon - 2 * kappa) - epsilon * epsilon, 0.0));
    return {cplx(plus), cplx(-plus), minus, -minus};
}

double multiset_distance(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b) {
    std::array<int, 4> p{0, 1, 2, 3};
    double best = INFINITY;
    do {
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[p[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

double argmax_bisect(const std::function<double(double)>& f, double a, double b, double h) {
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double x = 0.5 * (a + b);
        if (f(x + h) > f(x - h))
            a = x;
        else
            b = x;
    }
    return 0.5 * (a + b);
}

ringbec::ModeState rabi_solution(const ringbec::ModeState& s0, double kappa, double tau) {
    using ringbec::Ring;
    ringbec::ModeState s = s0;
    s.set_tau(s0.tau() + tau);
    const double c = std::cos(kappa * tau), sn = std::sin(kappa * tau);
    const cplx I(0, 1);
    for (int m = -s0.m_max(); m <= s0.m_max(); ++m) {
        const cplx ph = std::exp(-I * double(m) * double(m) * tau);
        const cplx u = s0.at(Ring::upper, m), d = s0.at(Ring::lower, m);
        s.at(Ring::upper, m) = ph * (c * u - I * sn * d);
        s.at(Ring::lower, m) = ph * (c * d - I * sn * u);
    }
    return s;
}

std::vector<cplx> cubic_convolution(std::span<const cplx> alpha) {
    const int M = static_cast<int>(alpha.size() - 1) / 2;
    auto a = [&](int m) { return std::abs(m) <= M ? alpha[m + M] : cplx{}; };
    std::vector<cplx> out(alpha.size());
    for (int m = -M; m <= M; ++m)
        for (int n = -M; n <= M; ++n)
            for (int q = -M; q <= M; ++q) out[m + M] += a(n) * std::conj(a(q)) * a(m - n + q);
    return out;
}

cplx tof_quadrature(std::span<const cplx> alpha, double r_ring, double k, double zeta) {
    const int M = static_cast<int>(alpha.size() - 1) / 2;
    auto sum = [&](int nodes) {
        cplx s{};
        for (int j = 0; j < nodes; ++j) {
            const double phi = two_pi * j / nodes;
            cplx chi{};
            for (int m = -M; m <= M; ++m) chi += alpha[m + M] * std::polar(1.0, m * phi);
            s += std::polar(1.0, -k * r_ring * std::cos(phi - zeta)) * chi;
        }
        return s / double(nodes);
    };
    int nodes = 32;
    cplx prev = sum(nodes);
    for (nodes *= 2; nodes <= (1 << 18); nodes *= 2) {
        const cplx cur = sum(nodes);
        if (std::abs(cur - prev) < 1e-14 * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw std::runtime_error("tof_quadrature: no convergence");
}

std::array<double, 2> axial_levels(const ringbec::units::AxialPotential& v, double mass) {
    const auto n = static_cast<Eigen::Index>(v.z.size()) - 2;  // interior nodes
    const double h = v.z[1] - v.z[0];
    const double t = ringbec::units::hbar * ringbec::units::hbar / (2.0 * mass * h * h);
    // Solved in units of t: the solver misbehaves on entries of order 1e-25.
    Eigen::VectorXd diag(n), off(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) diag[i] = 2.0 + v.v[static_cast<std::size_t>(i + 1)] / t;
    off.setConstant(-1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    return {t * es.eigenvalues()[0], t * es.eigenvalues()[1]};
}

}  // namespace oracle
