#pragma once

// Splittable deterministic PRNG. Substreams are derived by hashing
// (seed, purpose tag, index), so results do not depend on draw order
// across trials.

#include <cstdint>
#include <string_view>

namespace hadaudit {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

// FNV-1a over the tag, mixed with seed and index through SplitMix64 steps.
inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view tag,
                                    std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    SplitMix64 mixer(seed ^ h);
    mixer.next_u64();
    return mixer.next_u64() ^ SplitMix64(index ^ 0x9e3779b97f4a7c15ULL).next_u64();
}

inline SplitMix64 substream(std::uint64_t seed, std::string_view tag,
                            std::uint64_t index) {
    return SplitMix64(substream_seed(seed, tag, index));
}

}  // namespace hadaudit
