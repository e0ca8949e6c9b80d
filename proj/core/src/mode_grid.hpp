#pragma once

#include "fourier.hpp"
#include "ringbec/types.hpp"

namespace ringbec::detail {

/// Fills buf with chi_j = sum_m alpha_m exp(i m phi_j), phi_j = 2 pi j / N.
void to_grid(const cplx* alpha, int m_max, FftBuffer& buf);

/// coefficient * sum_{n,n'} a_n a*_n' a_{m-n+n'} for |m| <= m_max, via the
/// grid product |chi|^2 chi.
class NonlinearTerm {
public:
    NonlinearTerm(int m_max, double coefficient);

    static int grid_size_for(int m_max);
    void apply(const cplx* alpha, cplx* out);

private:
    int m_max_;
    double coefficient_;
    FftBuffer buf_;
};

}  // namespace ringbec::detail
