#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace statsum {

// splitmix64, used for seeding and stream derivation.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t x = (state += 0x9E3779B97F4A7C15ULL);
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }
};

// xoshiro256** (Blackman/Vigna). Platform-independent output sequence.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection; unbiased.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound) - 1;
        std::uint64_t x;
        do {
            x = next();
        } while (x > limit);
        return x % bound;
    }

private:
    std::array<std::uint64_t, 4> s_;
};

// Worker-count-independent substream derivation: hash of (seed, index).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 sm(seed ^ (0xA24BAED4963EE407ULL + index * 0x9FB21C651E98DF25ULL));
    sm.next();
    return sm.next();
}

inline Xoshiro256ss make_substream(std::uint64_t seed, std::uint64_t index) {
    return Xoshiro256ss(substream_seed(seed, index));
}

// Exact Binomial(n, 1/2) draw: popcount of n fair random bits.
inline long long sample_binomial_half(Xoshiro256ss& rng, long long n) {
    long long w = 0;
    long long remaining = n;
    while (remaining >= 64) {
        w += std::popcount(rng.next());
        remaining -= 64;
    }
    if (remaining > 0) {
        const std::uint64_t mask = (~std::uint64_t(0)) >> (64 - remaining);
        w += std::popcount(rng.next() & mask);
    }
    return w;
}

}  // namespace statsum
