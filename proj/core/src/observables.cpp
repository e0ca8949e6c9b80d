#include "ringbec/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace ringbec {

double Occupations::at(Ring r, int m) const {
    if (m < -m_max || m > m_max) throw std::out_of_range("Occupations: mode index outside [-m_max, m_max]");
    return (r == Ring::upper ? upper : lower)[static_cast<std::size_t>(m + m_max)];
}

Occupations occupations(const ModeState& state) {
    Occupations o;
    o.m_max = state.m_max();
    for (auto [ring, vec, total] : {std::tuple{Ring::upper, &o.upper, &o.n_u}, std::tuple{Ring::lower, &o.lower, &o.n_d}}) {
        auto a = state.ring(ring);
        vec->resize(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            (*vec)[i] = std::norm(a[i]);
            *total += (*vec)[i];
        }
    }
    return o;
}

double angular_momentum_ring(const Occupations& occ, Ring ring) {
    const double n = ring == Ring::upper ? occ.n_u : occ.n_d;
    if (!(n > 0.0)) throw std::domain_error("angular_momentum: empty ring");
    double l = 0.0;
    for (int m = -occ.m_max; m <= occ.m_max; ++m) l += m * occ.at(ring, m);
    return l / n;
}

AngularMomentum angular_momentum(const ModeState& state) {
    const auto o = occupations(state);
    return {angular_momentum_ring(o, Ring::upper), angular_momentum_ring(o, Ring::lower)};
}

double imbalance(const ModeState& state) {
    const auto o = occupations(state);
    return (o.n_d - o.n_u) / o.total();
}

namespace {

struct Line {
    double slope, intercept;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

// Quadratic coefficient of the least-squares parabola, in centred coordinates.
double quadratic_coefficient(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0;
    for (double v : x) mx += v;
    mx /= n;
    double s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - mx, d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
        t0 += y[i];
        t1 += d * y[i];
        t2 += d2 * y[i];
    }
    // Normal equations for (c0, c1, c2) with sum(d) = 0.
    const double A[3][3] = {{n, 0, s2}, {0, s2, s3}, {s2, s3, s4}};
    const double b[3] = {t0, t1, t2};
    auto det3 = [](const double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double D = det3(A);
    if (D == 0.0) return 0.0;
    double A2[3][3];
    for (int i = 0; i < 3; ++i) {
        A2[i][0] = A[i][0];
        A2[i][1] = A[i][1];
        A2[i][2] = b[i];
    }
    return det3(A2) / D;
}

}  // namespace

GrowthFit fit_growth_rate(const std::vector<double>& tau, const std::vector<double>& population,
                          double curvature_threshold) {
    if (tau.size() != population.size()) throw std::invalid_argument("fit_growth_rate: length mismatch");
    if (tau.size() < 3) throw std::domain_error("fit_growth_rate: fit window holds fewer than 3 samples");
    std::vector<double> logs(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (!(population[i] > 0.0)) throw std::domain_error("fit_growth_rate: non-positive population in window");
        logs[i] = std::log(population[i]);
    }
    const Line line = least_squares(tau, logs);
    GrowthFit fit;
    fit.rate = line.slope;
    fit.intercept = line.intercept;
    fit.tau_a = tau.front();
    fit.tau_b = tau.back();
    fit.points = static_cast<int>(tau.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double r = logs[i] - (line.intercept + line.slope * tau[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(tau.size()));
    if (tau.size() >= 4) {
        const double c2 = quadratic_coefficient(tau, logs);
        fit.slope_change = 2.0 * c2 * (fit.tau_b - fit.tau_a);
        fit.saturated = std::abs(fit.slope_change) > curvature_threshold * std::max(std::abs(fit.rate), 1.0);
    }
    return fit;
}

GrowthFit fit_growth_rate(const Trajectory& trajectory, int m, const GrowthFitOptions& options) {
    if (trajectory.empty()) throw std::domain_error("fit_growth_rate: empty trajectory");
    if (options.pair && m == 0) throw std::invalid_argument("fit_growth_rate: pair fit needs m != 0");

    std::vector<double> tau, pop;
    tau.reserve(trajectory.size());
    pop.reserve(trajectory.size());
    for (const auto& s : trajectory.samples) {
        double n = std::norm(s.state.at(options.ring, m));
        if (options.pair) n += std::norm(s.state.at(options.ring, -m));
        tau.push_back(s.tau());
        pop.push_back(n);
    }

    std::size_t first = 0, last = 0;
    if (options.window) {
        const auto [a, b] = *options.window;
        first = tau.size();
        for (std::size_t i = 0; i < tau.size(); ++i)
            if (tau[i] >= a && tau[i] <= b) {
                if (first == tau.size()) first = i;
                last = i + 1;
            }
        if (first == tau.size()) throw std::domain_error("fit_growth_rate: fit window holds fewer than 3 samples");
    } else {
        const double lower = 10.0 * pop.front();
        const double upper = 1e-3 * trajectory.front().conserved.norm / 2.0;
        while (first < pop.size() && pop[first] < lower) ++first;
        last = first;
        while (last < pop.size() && pop[last] <= upper) ++last;
    }
    return fit_growth_rate(std::vector<double>(tau.begin() + first, tau.begin() + last),
                           std::vector<double>(pop.begin() + first, pop.begin() + last), options.curvature_threshold);
}

OnsetReport detect_onset(const Trajectory& trajectory, double imbalance_threshold) {
    OnsetReport r;
    r.tau_osc = std::numeric_limits<double>::quiet_NaN();
    const auto& s = trajectory.samples;
    std::size_t from = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(imbalance(s[i].state)) > imbalance_threshold) {
            r.reached = true;
            r.tau_osc = s[i].tau();
            r.index = i;
            from = i;
            break;
        }
    for (std::size_t i = from; i < s.size(); ++i) {
        r.max_imbalance = std::max(r.max_imbalance, std::abs(imbalance(s[i].state)));
        const auto l = angular_momentum(s[i].state);
        r.lz_amplitude = std::max({r.lz_amplitude, std::abs(l.lz_u), std::abs(l.lz_d)});
    }

    const std::size_t pre = r.reached ? r.index : s.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < pre; ++i) mean += imbalance(s[i].state);
    mean /= std::max<std::size_t>(pre, 1);
    std::vector<double> crossings;
    for (std::size_t i = 1; i < pre; ++i) {
        const double a = imbalance(s[i - 1].state) - mean, b = imbalance(s[i].state) - mean;
        if ((a < 0.0) != (b < 0.0) && a != b)
            crossings.push_back(s[i - 1].tau() + (s[i].tau() - s[i - 1].tau()) * a / (a - b));
    }
    r.josephson_frequency = crossings.size() < 2 ? std::numeric_limits<double>::quiet_NaN()
                                                 : pi * double(crossings.size() - 1) /
                                                       (crossings.back() - crossings.front());
    return r;
}

}  // namespace ringbec
