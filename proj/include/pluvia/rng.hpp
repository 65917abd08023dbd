#pragma once

#include <cstddef>
#include <cstdint>

namespace pluvia {

/// Deterministic 64-bit generator with an exactly specified update rule,
/// so identical seeds give identical streams on every platform.
///
/// The seed is mixed once with a splitmix64 step; the stream itself is
/// xorshift64*:
///   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output = x * 0x2545F4914F6CDD1D
/// Uniform doubles map the top 53 bits of the output to [0, 1).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix_seed(seed)) {}

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi) as lo + (hi - lo) * u01.
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_u01(); }

    /// Uniform index in [0, n) as floor(u01 * n); u01 < 1 keeps the result in range.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(next_u01() * static_cast<double>(n));
    }

private:
    static std::uint64_t mix_seed(std::uint64_t seed) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z == 0 ? 0x9E3779B97F4A7C15ULL : z;
    }

    std::uint64_t state_;
};

}  // namespace pluvia
