#include "ringbec/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ringbec/types.hpp"

namespace ringbec::units {

void check(const PhysicalParams& p) {
    std::vector<FieldError> errs;
    auto positive = [&](const char* name, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) errs.push_back({name, "must be finite and > 0"});
    };
    positive("physical.atom_mass", p.atom_mass);
    positive("physical.a_rho", p.a_rho);
    positive("physical.a_z", p.a_z);
    positive("physical.ring_radius", p.ring_radius);
    if (!(p.scattering_length >= 0.0) || !std::isfinite(p.scattering_length))
        errs.push_back({"physical.scattering_length", "attractive interaction unsupported (must be >= 0)"});
    if (p.z0 && (!(*p.z0 >= 0.0) || !std::isfinite(*p.z0))) errs.push_back({"physical.z0", "must be finite and >= 0"});
    if (p.axial_potential) {
        const auto& ap = *p.axial_potential;
        if (ap.z.size() != ap.v.size() || ap.z.size() < 5)
            errs.push_back({"physical.axial_potential", "needs matching z and v arrays of at least 5 points"});
        else if (!std::is_sorted(ap.z.begin(), ap.z.end(), std::less_equal<>{}) ||
                 std::adjacent_find(ap.z.begin(), ap.z.end()) != ap.z.end())
            errs.push_back({"physical.axial_potential", "z must be strictly increasing"});
    }
    if (!errs.empty()) throw ConfigError(std::move(errs));
}

std::vector<std::string> validity_warnings(const PhysicalParams& p) {
    std::vector<std::string> w;
    if (p.a_rho > 0.5 * p.ring_radius) w.push_back("a_rho is not small compared with R; 1D ring model may not apply");
    if (p.a_z > 0.5 * p.ring_radius) w.push_back("a_z is not small compared with R; 1D ring model may not apply");
    return w;
}

Scales scales(const PhysicalParams& p) {
    check(p);
    const double mr2 = 2.0 * p.atom_mass * p.ring_radius * p.ring_radius;
    return {hbar * hbar / mr2, mr2 / hbar};
}

double gamma_eff(const PhysicalParams& p) {
    check(p);
    const double R = p.ring_radius;
    return 4.0 * R * R * p.scattering_length / (p.a_rho * p.a_rho * std::sqrt(2.0 * pi) * p.a_z);
}

double n0_for_epsilon(double epsilon, double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("unreachable epsilon: gamma must be > 0");
    if (epsilon < 0.0) throw std::domain_error("attractive interaction unsupported");
    return 2.0 * pi * epsilon / gamma;
}

namespace {

double gaussian(double x, double a) { return std::pow(pi * a * a, -0.25) * std::exp(-0.5 * x * x / (a * a)); }

double gaussian_dd(double x, double a) {
    const double a2 = a * a;
    return (x * x / (a2 * a2) - 1.0 / a2) * gaussian(x, a);
}

double trapezoid(const std::vector<double>& z, const std::vector<double>& f, std::size_t stride) {
    double acc = 0.0;
    std::size_t i = 0;
    for (; i + stride < z.size(); i += stride) acc += 0.5 * (f[i] + f[i + stride]) * (z[i + stride] - z[i]);
    return acc;
}

}  // namespace

double kappa_from_potential(const PhysicalParams& p, const KappaOptions& options) {
    check(p);
    if (!p.axial_potential) throw std::invalid_argument("kappa_from_potential: axial_potential is required");
    const auto& ap = *p.axial_potential;
    const double z0 = p.z0.value_or(0.0);
    const double a = p.a_z;
    if (ap.z.front() > -z0 - 8.0 * a || ap.z.back() < z0 + 8.0 * a)
        throw std::invalid_argument("kappa_from_potential: potential grid must cover [-z0 - 8 a_z, z0 + 8 a_z]");
    if ((ap.z.size() - 1) % 2 != 0)
        throw std::invalid_argument("kappa_from_potential: potential grid needs an odd number of points");

    const double R2 = p.ring_radius * p.ring_radius;
    const double v_scale = 2.0 * p.atom_mass / (hbar * hbar);
    const std::size_t n = ap.z.size();
    // Integrands of <Phi_L|H|Phi_R>, <Phi_L|Phi_R> and <Phi_R|H|Phi_R> with H = -d^2 + (2M/hbar^2) V.
    std::vector<double> hop(n), overlap(n), site(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = ap.z[i], v = v_scale * ap.v[i];
        const double left = gaussian(z + z0, a), right = gaussian(z - z0, a);
        const double h_right = -gaussian_dd(z - z0, a) + v * right;
        hop[i] = left * h_right;
        overlap[i] = left * right;
        site[i] = right * h_right;
    }

    auto evaluate = [&](std::size_t stride) {
        double k = R2 * trapezoid(ap.z, hop, stride);
        if (options.reference == EnergyReference::on_site)
            k -= trapezoid(ap.z, overlap, stride) * R2 * trapezoid(ap.z, site, stride);
        return k;
    };
    const double fine = evaluate(1), coarse = evaluate(2);

    for (auto& h : hop) h = std::abs(h);
    const double mag = R2 * trapezoid(ap.z, hop, 1);
    if (std::abs(fine - coarse) > std::max(options.refinement_tol * std::abs(fine), 1e-10 * mag))
        throw std::runtime_error(
            "kappa_from_potential: quadrature unstable under refinement; tabulate the potential on a finer z grid");
    return fine;
}

AxialPotential double_harmonic_well(const PhysicalParams& p, double z0, double half_width, int points) {
    check(p);
    if (points < 5 || points % 2 == 0) throw std::invalid_argument("double_harmonic_well: points must be odd and >= 5");
    const double omega = hbar / (p.atom_mass * p.a_z * p.a_z);
    AxialPotential ap;
    ap.z.resize(static_cast<std::size_t>(points));
    ap.v.resize(ap.z.size());
    for (int i = 0; i < points; ++i) {
        const double z = -half_width + 2.0 * half_width * i / (points - 1);
        const double d = std::abs(z) - z0;
        ap.z[i] = z;
        ap.v[i] = 0.5 * p.atom_mass * omega * omega * d * d;
    }
    return ap;
}

AxialPotential harmonic_well(const PhysicalParams& p, double half_width, int points) {
    return double_harmonic_well(p, 0.0, half_width, points);
}

}  // namespace ringbec::units
