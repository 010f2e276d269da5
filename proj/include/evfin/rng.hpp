#pragma once

#include <cstdint>

namespace evfin {

// SplitMix64 (Steele, Lea, Flood). Small, fast and fully specified, so streams
// replay identically on every platform and standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next();
        while (x >= limit) {
            x = next();
        }
        return x % bound;
    }

private:
    std::uint64_t state_;
};

// Independent stream for item `index` under `seed`; depends on nothing else.
inline SplitMix64 derived_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed);
    const std::uint64_t base = mixer.next();
    SplitMix64 index_mixer(index ^ 0xD1B54A32D192ED03ULL);
    return SplitMix64(base ^ index_mixer.next());
}

} // namespace evfin
