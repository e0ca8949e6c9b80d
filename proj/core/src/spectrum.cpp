#include "ringbec/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ringbec {

double BranchFrequency::magnitude() const { return std::sqrt(std::abs(squared)); }

cplx BranchFrequency::value() const {
    return is_real() ? cplx{magnitude(), 0.0} : cplx{0.0, magnitude()};
}

double BranchFrequency::growth_rate() const { return is_real() ? 0.0 : 2.0 * magnitude(); }

namespace {

void require_repulsive(double epsilon) {
    if (!(epsilon >= 0.0)) throw std::domain_error("attractive interaction unsupported");
}

void require_nonzero_mode(int m) {
    if (m == 0) throw std::domain_error("zero mode has no instability window");
}

}  // namespace

double omega_plus(int m, double epsilon) {
    require_repulsive(epsilon);
    const double m2 = static_cast<double>(m) * m;
    return std::sqrt(m2 * (m2 + 2.0 * epsilon));
}

BranchFrequency omega_minus(int m, double epsilon, double kappa) {
    require_repulsive(epsilon);
    const double m2 = static_cast<double>(m) * m;
    // (m^2 + eps - 2k)^2 - eps^2 = (m^2 - 2k)(m^2 + 2 eps - 2k)
    return {(m2 - 2.0 * kappa) * (m2 + 2.0 * epsilon - 2.0 * kappa)};
}

SpectrumResult spectrum_at(int m, double epsilon, double kappa) {
    SpectrumResult r;
    r.m = m;
    r.omega_plus = omega_plus(m, epsilon);
    r.omega_minus = omega_minus(m, epsilon, kappa);
    r.growth_rate = r.omega_minus.growth_rate();
    r.lz_plus = lz_plus_per_particle(m, epsilon);
    return r;
}

KappaWindow instability_window(int m, double epsilon) {
    require_nonzero_mode(m);
    if (!(epsilon > 0.0)) throw std::domain_error("instability window requires epsilon > 0");
    const double half_m2 = 0.5 * static_cast<double>(m) * m;
    return {half_m2, half_m2 + epsilon};
}

MaxGrowth max_growth(int m, double epsilon) {
    require_nonzero_mode(m);
    if (!(epsilon > 0.0)) throw std::domain_error("max_growth requires epsilon > 0");
    return {0.5 * (static_cast<double>(m) * m + epsilon), 2.0 * epsilon};
}

double lz_plus_per_particle(int m, double epsilon) {
    require_repulsive(epsilon);
    if (m == 0) return 0.0;
    const double m2 = static_cast<double>(m) * m;
    return 0.5 * m * std::sqrt(m2 * m2 + 2.0 * epsilon * m2) / (m2 + epsilon);
}

std::array<std::array<cplx, 4>, 4> bogoliubov_matrix(int m, double epsilon, double kappa, StackParity parity,
                                                     double theta) {
    require_repulsive(epsilon);
    const double m2 = static_cast<double>(m) * m;
    const double mu = parity == StackParity::symmetric ? epsilon + kappa : epsilon - kappa;
    // Diagonal from the mean field (2 eps) minus the chemical potential.
    const double a = m2 + 2.0 * epsilon - mu;
    const cplx twist = std::polar(epsilon, 2.0 * theta);
    const cplx z{0.0, 0.0};
    return {{
        {cplx{a}, cplx{kappa}, twist, z},
        {cplx{kappa}, cplx{a}, z, twist},
        {-std::conj(twist), z, cplx{-a}, cplx{-kappa}},
        {z, -std::conj(twist), cplx{-kappa}, cplx{-a}},
    }};
}

BogoliubovEigen bogoliubov_eigensolve(int m, double epsilon, double kappa, StackParity parity, double theta) {
    const auto rows = bogoliubov_matrix(m, epsilon, kappa, parity, theta);
    Eigen::Matrix4cd mat;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) mat(i, j) = rows[i][j];

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(mat, true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("bogoliubov_eigensolve: eigensolver did not converge");

    std::array<int, 4> order{0, 1, 2, 3};
    const auto& vals = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (vals(i).real() != vals(j).real()) return vals(i).real() < vals(j).real();
        return vals(i).imag() < vals(j).imag();
    });

    BogoliubovEigen out;
    for (int k = 0; k < 4; ++k) {
        out.eigenvalues[k] = vals(order[k]);
        for (int i = 0; i < 4; ++i) out.eigenvectors[k][i] = solver.eigenvectors()(i, order[k]);
    }

    // At an exceptional point (window edge, or the m = 0 phase mode) the
    // matrix is defective and individual eigenvalues are only accurate to
    // O(sqrt(machine eps)); the mean of the cluster stays accurate to
    // O(machine eps), so clusters are collapsed onto their mean.
    const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
    const double tol = 1e-6 * scale;
    std::array<int, 4> label{0, 1, 2, 3};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(out.eigenvalues[i] - out.eigenvalues[j]) < tol) {
                const int from = label[j], to = label[i];
                for (auto& l : label)
                    if (l == from) l = to;
            }
    for (int c = 0; c < 4; ++c) {
        cplx sum{0.0, 0.0};
        int count = 0;
        for (int k = 0; k < 4; ++k)
            if (label[k] == c) {
                sum += out.eigenvalues[k];
                ++count;
            }
        if (count < 2) continue;
        const cplx mean = sum / static_cast<double>(count);
        for (int k = 0; k < 4; ++k)
            if (label[k] == c) out.eigenvalues[k] = mean;
        out.clustered += count;
    }
    return out;
}

double lz_from_eigenvector(int m, const std::array<cplx, 4>& vec, Ring ring) {
    double total = 0.0;
    for (const auto& c : vec) total += std::norm(c);
    if (!(total > 0.0)) throw std::domain_error("lz_from_eigenvector: zero vector");
    const int s = ring == Ring::upper ? 0 : 1;
    // u components carry +m, v_{-m} components carry -m.
    return m * (std::norm(vec[s]) - std::norm(vec[2 + s])) / total;
}

std::vector<ChartRow> stability_chart(double epsilon, std::span<const double> kappa_grid,
                                      std::span<const int> m_list) {
    if (kappa_grid.empty() || m_list.empty()) throw std::invalid_argument("stability_chart: empty grid");
    std::vector<ChartRow> rows;
    rows.reserve(kappa_grid.size() * m_list.size());
    for (int m : m_list)
        for (double kappa : kappa_grid) {
            const auto w = omega_minus(m, epsilon, kappa);
            const cplx v = w.value();
            rows.push_back({kappa, m, v.real(), v.imag(), w.growth_rate()});
        }
    return rows;
}

}  // namespace ringbec
