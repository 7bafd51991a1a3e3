#pragma once

#include <cstdint>
#include <random>

namespace hacomp {

// SplitMix64 finalizer; used to derive independent sub-stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of sub-stream `index` under root `seed` and a `domain` tag. Streams
// depend only on (seed, domain, index), never on generation order.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t domain,
                                    std::uint64_t index) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ domain) ^ index);
}

using Engine = std::mt19937_64;

inline Engine make_stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
    return Engine(stream_seed(seed, domain, index));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace hacomp
