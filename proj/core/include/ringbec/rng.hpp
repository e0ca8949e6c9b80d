#pragma once

#include <cstdint>

namespace ringbec {

/// Counter-based random stream (SplitMix64 finalizer over a Weyl counter).
///
/// Draw k of a stream depends only on (seed, k), so sequences are
/// bit-identical across runs, compilers and platforms. Floating-point
/// transforms are done here rather than with <random> distributions, whose
/// output is implementation-defined.
class RngStream {
public:
    static constexpr int version = 1;

    explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal via Box-Muller; consumes two draws.
    double normal() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace ringbec
