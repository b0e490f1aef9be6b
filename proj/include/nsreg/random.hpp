#ifndef NSREG_RANDOM_HPP
#define NSREG_RANDOM_HPP

#include <cstdint>

namespace nsreg::random {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: the value at (seed, stream, counter) depends on nothing else,
/// so draws are reproducible across platforms and independent of evaluation order.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const noexcept {
        return mix64(key_ ^ mix64(stream * 0xD1B54A32D192ED03ULL + counter));
    }

    /// Uniform double in [-1, 1) with 53 random bits.
    constexpr double symmetric(std::uint64_t stream, std::uint64_t counter) const noexcept {
        const double u = static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
        return 2.0 * u - 1.0;
    }

private:
    std::uint64_t key_;
};

} // namespace nsreg::random

#endif
