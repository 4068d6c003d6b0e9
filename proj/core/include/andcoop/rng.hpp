#pragma once

#include <array>
#include <cstdint>

namespace andcoop {

/// Counter-based Philox4x32-10 generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3", SC'11).
///
/// A stream is identified by (key, stream_id). Draws within a stream consume
/// successive 128-bit counter blocks, so distinct (key, stream) pairs can
/// never overlap and replications may be assigned to workers in any order
/// without changing the numbers they see.
class Philox {
public:
    Philox(std::uint64_t key, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform();
    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos();
    /// Standard normal via Box-Muller; second value of each pair is cached.
    double normal();
    /// Unit-mean exponential.
    double exponential();

    /// One keyed 10-round block; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; used to spread user seeds and purpose tags into
/// independent Philox keys.
std::uint64_t mix64(std::uint64_t x);

/// Key for a (master seed, purpose) pair. Streams under different purposes
/// are unrelated even when their stream ids collide.
inline std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t purpose_tag) {
    return mix64(master_seed + 0x9E3779B97F4A7C15ull * (purpose_tag + 1));
}

} // namespace andcoop
