#pragma once

#include <cstdint>
#include <limits>

namespace mshift {

/// SplitMix64 stream. Streams for (seed, a, b) are derived by hashing the triple, so draws
/// do not depend on the order in which streams are consumed.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static SplitMix64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        SplitMix64 mixer(seed);
        std::uint64_t s = mixer();
        s ^= mix(a + 0x632be59bd9b4e019ULL);
        s = mix(s);
        s ^= mix(b + 0x85157af5ULL);
        return SplitMix64(mix(s));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace mshift
