#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace parclass {

// All randomness flows through one seedable generator so splits, samples and
// forests reproduce across platforms. mt19937_64 output is fully specified by
// the standard; std::*_distribution is not, so index and real draws are
// derived from raw engine output below.
using Rng = std::mt19937_64;

// Derives a stream seed from a base seed, e.g. the per-tree seeds of a
// forest: seed_i = mix_seed(seed, i). SplitMix64 finalizer.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Unbiased draw from [0, n) by rejection.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    const std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = top - top % static_cast<std::uint64_t>(n);
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return static_cast<std::size_t>(x % static_cast<std::uint64_t>(n));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_real01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; avoids std::normal_distribution for reproducibility.
inline double gaussian(Rng& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform_real01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
}

// Fisher-Yates permutation of 0..n-1.
inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
    }
    return idx;
}

// k distinct indices from [0, n), drawn without replacement.
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n,
                                                           std::size_t k) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace parclass
