#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace amlgen {

/// Deterministic splittable random stream.
///
/// Every stream is identified by a 64-bit key derived from the master seed
/// and a path of (tag, index) pairs. Deriving a child never consumes state
/// from the parent, so the draw sequence of any stream depends only on the
/// master seed and its path, not on evaluation order.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t master_seed)
        : key_(mix(master_seed ^ 0x416d6c67656e5253ULL)), state_(mix(key_)) {}

    /// Pure derivation: identical (parent key, tag, index) always yields an
    /// identical child stream.
    [[nodiscard]] RandomStream derive(std::string_view tag, std::uint64_t index = 0) const {
        std::uint64_t k = key_;
        k = mix(k ^ fnv1a(tag));
        k = mix(k ^ index);
        return RandomStream(k, from_key{});
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() {
        // splitmix64 step (Vigna's public-domain constants).
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; convenient for log() arguments.
    double next_double_oc() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_int(std::uint64_t n) {
        // Lemire's multiply-shift; bias is rejected away.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform integer in [lo, hi] inclusive.
    long long uniform_range(long long lo, long long hi) {
        return lo + static_cast<long long>(uniform_int(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool bernoulli(double p) { return next_double() < p; }

    /// Standard normal via Box-Muller (no cached spare, keeps draws
    /// reproducible one call at a time).
    double normal() {
        double u1 = next_double_oc();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double std_dev) { return mean + std_dev * normal(); }

private:
    struct from_key {};
    RandomStream(std::uint64_t key, from_key) : key_(key), state_(mix(key)) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::uint64_t key_;
    std::uint64_t state_;
};

}  // namespace amlgen
