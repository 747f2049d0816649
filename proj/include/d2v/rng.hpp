#pragma once

#include <cstdint>
#include <vector>

namespace d2v {

// splitmix64 finalizer; full-period 64-bit mixer
inline constexpr uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Named sub-streams derived from one master seed. Streams are independent of
// each other and of how many indices are drawn from sibling streams, which is
// what keeps suites prefix-stable across sweep sizes.
namespace streams {
inline constexpr uint64_t kTrainDomain = 0x7261696e646f6dULL; // training-suite domains
inline constexpr uint64_t kTestDomain = 0x74657374646f6dULL;  // held-out test-suite domains
inline constexpr uint64_t kModelInit = 0x696e6974ULL;
inline constexpr uint64_t kTrainLoop = 0x6c6f6f70ULL;
inline constexpr uint64_t kSearch = 0x736561726368ULL;
inline constexpr uint64_t kSweep = 0x7377656570ULL;
inline constexpr uint64_t kHoldout = 0x686f6c64ULL;
} // namespace streams

inline constexpr uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t index) {
    return mix64(mix64(master ^ mix64(stream)) ^ index);
}

// Deterministic, self-contained generator (splitmix64). The standard-library
// distributions are not bit-stable across implementations, so all draws are
// built from raw 64-bit outputs here.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // (0, 1); rejects the single zero output
    double uniform_open() {
        double u = uniform();
        while (u == 0.0) u = uniform();
        return u;
    }

    // unbiased integer in [0, n)
    uint64_t uniform_below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            const uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    uint64_t state_;
};

} // namespace d2v
