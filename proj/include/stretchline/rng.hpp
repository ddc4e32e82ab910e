#pragma once

// Deterministic, platform-independent randomness. All draws go through
// splitmix64 so outputs are reproducible bit-for-bit for a fixed seed;
// per-suite streams are derived from the root seed and a tag.

#include <cstdint>
#include <string_view>

namespace stretchline {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    long index(long n) { return static_cast<long>(next() % static_cast<std::uint64_t>(n)); }

    bool coin() { return (next() & 1ull) != 0; }

private:
    std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ull ^ root;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace stretchline
