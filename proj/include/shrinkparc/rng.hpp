#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace shrinkparc::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Derives an independent stream seed from (seed, tag, index).
///
/// Every random draw in the library goes through a stream derived this way
/// from one master seed, so results are reproducible regardless of thread
/// count or evaluation order.
inline std::uint64_t substream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ hash_tag(tag)) ^ splitmix64(index));
}

/// Seeded generator with an explicit Box-Muller normal.
///
/// The normal draw consumes exactly two uniforms per call and keeps no
/// cached state, so the consumption sequence is fully determined by the
/// seed and the call order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Uniform integer in [0, n), n >= 1. Rejection-free modulo of a
    /// 64-bit draw; bias is negligible for the window sizes used here.
    std::uint64_t uniform_index(std::uint64_t n) {
        return gen_() % n;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace shrinkparc::rng
