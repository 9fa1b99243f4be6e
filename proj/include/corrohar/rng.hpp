#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace corrohar {

// splitmix64 generator. The standard <random> engines and distributions are
// implementation-defined, so every random draw in the library goes through
// this class to keep seeded runs byte-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in the open interval (0, 1).
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n). Lemire multiply-shift, no rejection loop.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller (cosine branch only).
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    // Exponential with the given rate; used for Poisson arrival times.
    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

private:
    std::uint64_t state_;
};

// Labeled seed derivation: one master seed fans out to independent sub-streams
// keyed by (role, index). Counter-based, so consumers may draw in any order or
// in parallel without affecting each other's streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view role,
                                 std::uint64_t index = 0) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](std::uint64_t byte) {
        h ^= byte;
        h *= 1099511628211ull;
    };
    for (char c : role) mix(static_cast<unsigned char>(c));
    for (int i = 0; i < 8; ++i) mix((index >> (8 * i)) & 0xff);
    return Rng(seed ^ h).next_u64();
}

}  // namespace corrohar
