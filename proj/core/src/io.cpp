#include "ringbec/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "ringbec/observables.hpp"

namespace ringbec {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return {buf, res.ptr};
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    if (trajectory.empty()) throw std::invalid_argument("write_trajectory_csv: empty trajectory");
    const int M = trajectory.front().state.m_max();
    out << "tau";
    for (const char* r : {"u", "d"})
        for (int m = -M; m <= M; ++m) out << ",N_" << r << '_' << m;
    out << ",lz_u,lz_d,n_u,n_d,norm,energy,lz_total\n";

    for (const auto& s : trajectory.samples) {
        const auto occ = occupations(s.state);
        out << format_double(s.tau());
        for (const auto* v : {&occ.upper, &occ.lower})
            for (double n : *v) out << ',' << format_double(n);
        // An emptied ring has no defined <L_z>; written as 0.
        const double lz_u = occ.n_u > 0 ? angular_momentum_ring(occ, Ring::upper) : 0.0;
        const double lz_d = occ.n_d > 0 ? angular_momentum_ring(occ, Ring::lower) : 0.0;
        out << ',' << format_double(lz_u) << ',' << format_double(lz_d) << ',' << format_double(occ.n_u) << ','
            << format_double(occ.n_d) << ',' << format_double(s.conserved.norm) << ','
            << format_double(s.conserved.energy) << ',' << format_double(s.conserved.lz_total) << '\n';
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
    auto out = open_for_write(path);
    write_trajectory_csv(out, trajectory);
    if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_stability_csv(std::ostream& out, std::span<const ChartRow> rows) {
    out << "kappa,m,re_omega_minus,im_omega_minus,growth_rate\n";
    for (const auto& r : rows)
        out << format_double(r.kappa) << ',' << r.m << ',' << format_double(r.re_omega_minus) << ','
            << format_double(r.im_omega_minus) << ',' << format_double(r.growth_rate) << '\n';
}

void write_stability_csv(const std::filesystem::path& path, std::span<const ChartRow> rows) {
    auto out = open_for_write(path);
    write_stability_csv(out, rows);
    if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace ringbec
