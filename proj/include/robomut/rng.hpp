#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace robomut {

// 64-bit mixing and seeding utilities. Everything random in the toolkit is
// derived from a single master seed through these functions; no wall-clock
// or OS entropy is used anywhere.

/// SplitMix64 finalizer step.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Fixed mixing function mapping (masterSeed, roundIndex, mutantId) to the
/// 64-bit seed of one run. Injective in practice over experiment-sized
/// grids; mutant id 0 is reserved for the original program.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t round_index,
                                 std::uint64_t mutant_id) {
    std::uint64_t x = mix64(master_seed);
    x = mix64(x ^ (0x9E3779B97F4A7C15ull * (round_index + 1)));
    x = mix64(x ^ (0xC2B2AE3D27D4EB4Full * (mutant_id + 1)));
    return x;
}

/// FNV-1a over bytes; used for input hashes and per-test stream seeds.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact
/// output by the standard); all conversions to doubles are done by hand so
/// sequences do not depend on the standard library's distribution
/// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_u01(); }

    /// Fair coin.
    bool next_bool() { return (engine_() >> 63) != 0; }

    /// Standard normal via Box-Muller (cosine branch only, for a simple
    /// fixed consumption pattern).
    double next_gauss() {
        double u1 = next_u01();
        while (u1 <= 0.0) u1 = next_u01();
        const double u2 = next_u01();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace robomut
