#include "fourier.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace ringbec::detail {

namespace {
// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftBuffer::FftBuffer(int n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n)));
    if (!data_) throw std::bad_alloc();
    auto* raw = reinterpret_cast<fftw_complex*>(data_);
    // FFTW_ESTIMATE keeps plan selection, and so rounding, identical between runs.
    forward_ = fftw_plan_dft_1d(n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    for (int i = 0; i < n; ++i) data_[i] = 0.0;
}

FftBuffer::~FftBuffer() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(data_);
}

void FftBuffer::forward() noexcept { fftw_execute(forward_); }
void FftBuffer::backward() noexcept { fftw_execute(backward_); }

FftBuffer& thread_buffer(int n) {
    thread_local std::map<int, std::unique_ptr<FftBuffer>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftBuffer>(n);
    return *slot;
}

int next_pow2(int n) noexcept {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace ringbec::detail
