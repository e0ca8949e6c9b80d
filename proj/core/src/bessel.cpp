#include "ringbec/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace ringbec {

namespace {

void check_range(int n, double x) {
    if (n < 0 || n > bessel_max_order) throw std::domain_error("bessel_j: order outside [0, 64]");
    if (!(x >= 0.0) || x > bessel_max_argument) throw std::domain_error("bessel_j: argument outside [0, 1000]");
}

double series(int n, double x) {
    const double h = 0.5 * x, h2 = h * h;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= h / k;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -h2 / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

std::vector<double> bessel_j_sequence(int n_max, double x) {
    check_range(n_max, x);
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x < 1.0) {
        for (int n = 0; n <= n_max; ++n) out[n] = series(n, x);
        return out;
    }

    const double top = std::max(static_cast<double>(n_max), x);
    const int start = 2 * ((static_cast<int>(top) + 20 + static_cast<int>(std::sqrt(60.0 * top))) / 2);
    double next = 0.0, cur = 1e-300, norm = 0.0;
    for (int k = start; k > 0; --k) {
        const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if (k - 1 <= n_max) out[k - 1] = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            for (int j = k - 1; j <= n_max; ++j) out[j] *= 1e-250;
        }
    }
    norm += cur;
    for (auto& v : out) v /= norm;
    return out;
}

double bessel_j(int n, double x) {
    check_range(n, x);
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x < 1.0) return series(n, x);
    return bessel_j_sequence(n, x)[static_cast<std::size_t>(n)];
}

}  // namespace ringbec
