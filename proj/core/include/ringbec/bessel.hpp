#pragma once

#include <vector>

namespace ringbec {

inline constexpr int bessel_max_order = 64;
inline constexpr double bessel_max_argument = 1e3;

/// Bessel function of the first kind J_n(x) for 0 <= n <= 64 and
/// 0 <= x <= 1000. Ascending series for x < 1, Miller's backward recurrence
/// normalized by J_0 + 2 sum J_2k = 1 otherwise. Throws std::domain_error
/// outside that range.
double bessel_j(int n, double x);

/// J_0(x) ... J_n_max(x) from one recurrence.
std::vector<double> bessel_j_sequence(int n_max, double x);

}  // namespace ringbec
