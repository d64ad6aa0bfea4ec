#pragma once

#include <cstdint>
#include <vector>

namespace arcparse {

// SplitMix64. Fixed algorithm so that seeded runs reproduce bit-exactly on
// every platform; std::shuffle and the std distributions make no such
// guarantee.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on [0, bound). Modulo bias is negligible for the bounds used
    // here (far below 2^32).
    uint64_t next_below(uint64_t bound) { return next() % bound; }

private:
    uint64_t state_;
};

template <typename T>
void deterministic_shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = rng.next_below(i);
        std::swap(items[i - 1], items[j]);
    }
}

// Stable derived seed for substreams (per epoch, per length, per trial).
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    SplitMix64 rng(seed ^ (0x5851f42d4c957f2dull + stream));
    return rng.next();
}

}  // namespace arcparse
