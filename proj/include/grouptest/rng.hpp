#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace gt {

// splitmix64 step; used only to mix seed material, never as the main stream.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Collapses (seed, t, trial, purpose, ...) into one 64-bit stream seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t state = 0x8f3d1b0c24a65e37ull;
    std::uint64_t h = 0;
    for (auto p : parts) {
        state ^= p;
        h ^= splitmix64(state);
    }
    return h;
}

// Deterministic random stream. mt19937_64 seeded from a single value has
// standard-specified output, and all derived draws below avoid
// implementation-defined <random> distributions, so a seed fully determines
// every value on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n) by masked rejection.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const int bits = 64 - std::countl_zero(n - 1);
        const std::uint64_t mask = (bits == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << bits) - 1);
        std::uint64_t v;
        do {
            v = eng_() & mask;
        } while (v >= n);
        return v;
    }

    // Uniform k-subset of {1..n}, returned sorted. Partial Fisher-Yates.
    std::vector<int> sample_items(int n, int k) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
        for (int j = 0; j < k; ++j) {
            const auto r = j + static_cast<int>(next_below(static_cast<std::uint64_t>(n - j)));
            std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(r)]);
        }
        pool.resize(static_cast<std::size_t>(k));
        std::sort(pool.begin(), pool.end());
        return pool;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gt
