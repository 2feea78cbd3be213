#pragma once

#include <array>
#include <cstdint>

namespace nld {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure function of counter and key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; used to derive independent sub-seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) noexcept;

/// Counter-based random stream. Output number k is a pure function of
/// (seed, stream_index, k): the seed is the Philox key and the counter is
/// (block index, stream_index). One stream per Monte-Carlo path.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
        : seed_(seed), stream_index_(stream_index) {}

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0,1), 53-bit resolution.
    double uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard exponential.
    double exponential() noexcept;

    /// Standard normal (Box-Muller; the second variate is cached).
    double normal() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    /// Number of 64-bit words consumed so far.
    std::uint64_t words_drawn() const noexcept { return block_ * 2 - (has_buffered_ ? 1 : 0); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::uint64_t block_ = 0;
    std::uint64_t buffered_ = 0;
    bool has_buffered_ = false;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace nld
