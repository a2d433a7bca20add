#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lapsmooth {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

// Streams are keyed by (seed, purpose, index) so that parallel replicates never
// share state and results do not depend on scheduling order.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0) {
    std::uint64_t s = seed;
    s ^= detail::splitmix64(s) + detail::fnv1a(purpose);
    s ^= detail::splitmix64(s) + index;
    std::uint64_t s2 = s;
    return std::mt19937_64(detail::splitmix64(s2));
}

inline double uniform01(std::mt19937_64& g) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

inline double normal(std::mt19937_64& g) {
    return std::normal_distribution<double>(0.0, 1.0)(g);
}

}  // namespace lapsmooth
