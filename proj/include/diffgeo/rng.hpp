#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace diffgeo {

/// Named sub-streams derived from a single experiment seed.
enum class Stream : std::uint64_t {
    Sampling = 0x53414d50,
    Noise = 0x4e4f4953,
    Embedding = 0x454d4244,
    Sweep = 0x53574550,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Mixes a base seed with a sequence of counters; independent of call order elsewhere.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = splitmix64(seed);
    for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

/// FNV-1a, used to fold names into seeds.
constexpr std::uint64_t hash_string(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::mt19937_64 make_engine(std::uint64_t seed, Stream stream) {
    return std::mt19937_64(mix_seed(seed, {static_cast<std::uint64_t>(stream)}));
}

}  // namespace diffgeo
