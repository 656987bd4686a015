#pragma once
#include <cstdint>
#include <random>

namespace bjq {

// splitmix64 finalizer; decorrelates substream seeds derived from one root seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Engine for one (seed, purpose) substream. Each purpose gets its own engine so
// parallel replicates draw identical numbers regardless of scheduling.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t purpose) {
    return std::mt19937_64(mix64(mix64(seed) ^ mix64(purpose ^ 0x5bd1e995ULL)));
}

} // namespace bjq
