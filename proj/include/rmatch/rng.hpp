#ifndef RMATCH_RNG_HPP
#define RMATCH_RNG_HPP

#include <cstdint>

namespace rmatch {

/// SplitMix64 (Steele/Lea/Burke splittable generator, the reference
/// java.util.SplittableRandom mixing constants).  Pure 64-bit integer
/// arithmetic, so a (seed, stream) pair reproduces the same draws on every
/// platform.  Streams derived via split() are decorrelated by two rounds of
/// the output mix.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Generator for substream `index` of `seed`, e.g. one per trial.
    static SplitMix64 split(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(mix(mix(seed) ^ (index + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1), 53 random mantissa bits.
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, bound) by 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    bool next_bernoulli(double p) { return next_double() < p; }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t state_;
};

}  // namespace rmatch

#endif  // RMATCH_RNG_HPP
