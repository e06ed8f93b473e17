#pragma once

#include <cstdint>

namespace camforge {

/// SplitMix64 mixing step (Steele et al.); used to derive seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// PCG32 (O'Neill, pcg-random.org, XSH-RR variant). Chosen over std::
/// engines because its output is fully specified, so identical seeds give
/// byte-identical streams on every platform and standard library.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0x14057B7EF767814FULL) {
        state_ = 0;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        std::uint64_t lo = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double strictly inside (0, 1).
    double next_open01() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) /
               (0x1.0p53 + 2.0);
    }

    double uniform(double lo, double hi) {
        return lo + next_double() * (hi - lo);
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/// Derives an independent sub-stream seed from (master seed, a, b).
/// Used for per-trajectory streams keyed by effect and item index.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (0x9E3779B97F4A7C15ULL * (a + 1)));
    s = splitmix64(s ^ (0xC2B2AE3D27D4EB4FULL * (b + 1)));
    return s;
}

}  // namespace camforge
