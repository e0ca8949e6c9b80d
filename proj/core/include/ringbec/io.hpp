#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "ringbec/spectrum.hpp"
#include "ringbec/trajectory.hpp"

namespace ringbec {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Columns: tau, N_u_<m> and N_d_<m> for m = -m_max..m_max, lz_u, lz_d,
/// n_u, n_d, norm, energy, lz_total.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);

/// Columns: kappa, m, re_omega_minus, im_omega_minus, growth_rate.
void write_stability_csv(std::ostream& out, std::span<const ChartRow> rows);
void write_stability_csv(const std::filesystem::path& path, std::span<const ChartRow> rows);

}  // namespace ringbec
