#include "ringbec/tof.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "ringbec/bessel.hpp"
#include "ringbec/io.hpp"

namespace ringbec {

const char* convention_name(PhaseConvention c) {
    return c == PhaseConvention::jacobi_anger ? "jacobi_anger" : "printed";
}

PhaseConvention parse_convention(const std::string& name) {
    if (name == "jacobi_anger") return PhaseConvention::jacobi_anger;
    if (name == "printed") return PhaseConvention::printed;
    throw std::invalid_argument("unknown phase convention '" + name + "'");
}

namespace {

cplx phase_factor(int m, PhaseConvention c) {
    const int a = std::abs(m);
    if (c == PhaseConvention::jacobi_anger) {
        static constexpr cplx powers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};  // (-i)^k
        return powers[a % 4];
    }
    // Floor division keeps the printed exponents well defined for m < 0.
    auto parity = [](int e) { return ((e % 2) + 2) % 2 == 0 ? 1.0 : -1.0; };
    if (m % 2 == 0) return parity(m / 2);
    return -parity((m - 1) / 2);
}

cplx psi_from_bessel(std::span<const cplx> alpha, const std::vector<double>& J, double zeta, PhaseConvention c) {
    const int M = static_cast<int>(alpha.size()) / 2;
    cplx sum{};
    for (int m = -M; m <= M; ++m) {
        const cplx a = alpha[static_cast<std::size_t>(m + M)];
        if (a == cplx{}) continue;
        sum += phase_factor(m, c) * J[static_cast<std::size_t>(std::abs(m))] * a * std::polar(1.0, m * zeta);
    }
    return sum;
}

int half_width(std::span<const cplx> alpha) {
    if (alpha.size() % 2 == 0) throw std::invalid_argument("psi_k: amplitude array length must be odd");
    return static_cast<int>(alpha.size()) / 2;
}

}  // namespace

cplx psi_k(std::span<const cplx> alpha, double r_ring, double k, double zeta, PhaseConvention convention) {
    const int M = half_width(alpha);
    const auto J = bessel_j_sequence(M, std::abs(k) * r_ring);
    return psi_from_bessel(alpha, J, zeta, convention);
}

cplx psi_k_oracle(std::span<const cplx> alpha, double r_ring, double k, double zeta, double tol) {
    const int M = half_width(alpha);
    auto integrate = [&](int n) {
        cplx acc{};
        for (int j = 0; j < n; ++j) {
            const double phi = 2.0 * pi * j / n;
            cplx chi{};
            for (int m = -M; m <= M; ++m) chi += alpha[static_cast<std::size_t>(m + M)] * std::polar(1.0, m * phi);
            acc += std::polar(1.0, -k * r_ring * std::cos(phi - zeta)) * chi;
        }
        return acc / static_cast<double>(n);
    };
    double scale = 0.0;
    for (const auto& a : alpha) scale += std::abs(a);
    cplx prev = integrate(16);
    for (int n = 32; n <= (1 << 16); n *= 2) {
        const cplx cur = integrate(n);
        if (std::abs(cur - prev) <= tol * std::max(scale, 1e-300)) return cur;
        prev = cur;
    }
    throw std::runtime_error("psi_k_oracle: quadrature did not converge");
}

TofImage tof_image(const ModeState& state, Ring ring, double k_max, int resolution, PhaseConvention convention,
                   int threads) {
    if (resolution < 2) throw std::invalid_argument("tof_image: resolution must be >= 2");
    if (!(k_max > 0.0)) throw std::invalid_argument("tof_image: k_max must be > 0");
    if (k_max * std::sqrt(2.0) > bessel_max_argument) throw std::invalid_argument("tof_image: k_max too large");
    if (state.m_max() > bessel_max_order) throw std::invalid_argument("tof_image: m_max exceeds Bessel order range");

    TofImage img;
    img.resolution = resolution;
    img.k_max = k_max;
    img.convention = convention;
    img.kx.resize(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) img.kx[i] = -k_max + 2.0 * k_max * i / (resolution - 1);
    img.ky = img.kx;
    img.intensity.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);

    const auto alpha = state.ring(ring);
    auto rows = [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < resolution; ++i) {
                const double kx = img.kx[i], ky = img.ky[j];
                const auto J = bessel_j_sequence(state.m_max(), std::hypot(kx, ky));
                img.intensity[static_cast<std::size_t>(j) * resolution + i] =
                    std::norm(psi_from_bessel(alpha, J, std::atan2(ky, kx), convention));
            }
    };
    const int nt = std::clamp(threads, 1, resolution);
    if (nt == 1) {
        rows(0, resolution);
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(rows, resolution * t / nt, resolution * (t + 1) / nt);
    }

    const double peak = *std::max_element(img.intensity.begin(), img.intensity.end());
    if (peak > 0.0)
        for (auto& v : img.intensity) v /= peak;
    return img;
}

void write_tof_csv(const std::filesystem::path& path, const TofImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "kx,ky,intensity\n";
    for (int j = 0; j < image.resolution; ++j)
        for (int i = 0; i < image.resolution; ++i)
            out << format_double(image.kx[i]) << ',' << format_double(image.ky[j]) << ','
                << format_double(image.at(i, j)) << '\n';
    if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_tof_pgm(const std::filesystem::path& path, const TofImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "P5\n" << image.resolution << ' ' << image.resolution << "\n65535\n";
    for (int j = image.resolution - 1; j >= 0; --j)
        for (int i = 0; i < image.resolution; ++i) {
            const double v = std::clamp(image.at(i, j), 0.0, 1.0);
            const auto q = static_cast<unsigned>(std::lround(v * 65535.0));
            out.put(static_cast<char>((q >> 8) & 0xff));
            out.put(static_cast<char>(q & 0xff));
        }
    if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace ringbec
