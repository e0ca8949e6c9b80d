#pragma once

#include <fftw3.h>

#include <complex>
#include <span>

namespace ringbec::detail {

/// In-place complex DFT of fixed length on an FFTW-aligned buffer.
///
/// forward():  X_k = sum_j x_j exp(-2 pi i jk/N)
/// backward(): x_j = sum_k X_k exp(+2 pi i jk/N)   (unnormalized)
class FftBuffer {
public:
    explicit FftBuffer(int n);
    ~FftBuffer();
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    int size() const noexcept { return n_; }
    std::span<std::complex<double>> data() noexcept { return {data_, static_cast<std::size_t>(n_)}; }
    std::complex<double>& operator[](int i) noexcept { return data_[i]; }

    void forward() noexcept;
    void backward() noexcept;

private:
    int n_;
    std::complex<double>* data_;
    fftw_plan forward_;
    fftw_plan backward_;
};

/// Per-thread buffer of length n, planned once and reused.
FftBuffer& thread_buffer(int n);

/// Smallest power of two >= n.
int next_pow2(int n) noexcept;

/// Index of angular momentum m in FFT ordering of length n.
inline int fft_index(int m, int n) noexcept { return m >= 0 ? m : m + n; }

}  // namespace ringbec::detail
