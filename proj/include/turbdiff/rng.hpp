#pragma once

// Counter-based random numbers (Philox 4x32-10) plus SplitMix64 for seed
// derivation. Every draw is a pure function of (key, counter), so parallel
// streams keyed by (seed, mode, step) reproduce bit-identically regardless of
// evaluation order or thread scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace turbdiff {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stateless hash-combine used to derive child seeds (per trajectory, per
// purpose) from a master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ull * (tag + 1));
    std::uint64_t z = splitmix64(s);
    s ^= index * 0x9E3779B97F4A7C15ull + z;
    return splitmix64(s);
}

namespace philox {

struct Block {
    std::array<std::uint32_t, 4> x;
};

inline Block philox4x32(std::uint64_t key, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                        std::uint32_t c3) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
        std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
        std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32), l0 = static_cast<std::uint32_t>(p0);
        std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32), l1 = static_cast<std::uint32_t>(p1);
        std::uint32_t n0 = h1 ^ c1 ^ k0;
        std::uint32_t n2 = h0 ^ c3 ^ k1;
        c0 = n0;
        c1 = l1;
        c2 = n2;
        c3 = l0;
        k0 += W0;
        k1 += W1;
    }
    return Block{{c0, c1, c2, c3}};
}

}  // namespace philox

// One Philox block -> two u64 -> two uniforms -> one Box-Muller normal pair.
struct NormalPair {
    double z0, z1;
};

inline NormalPair normal_pair(std::uint64_t key, std::uint32_t c0, std::uint32_t c1,
                              std::uint32_t c2, std::uint32_t c3) {
    auto b = philox::philox4x32(key, c0, c1, c2, c3);
    std::uint64_t a = (static_cast<std::uint64_t>(b.x[0]) << 32) | b.x[1];
    std::uint64_t c = (static_cast<std::uint64_t>(b.x[2]) << 32) | b.x[3];
    // u1 in (0, 1] so the log is finite; u2 in [0, 1)
    double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(c >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

inline double uniform01(std::uint64_t key, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                        std::uint32_t c3) {
    auto b = philox::philox4x32(key, c0, c1, c2, c3);
    std::uint64_t a = (static_cast<std::uint64_t>(b.x[0]) << 32) | b.x[1];
    return static_cast<double>(a >> 11) * 0x1.0p-53;
}

// Sequential convenience wrapper over the counter-based core, for oracles and
// sampling loops that do not need addressable streams.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : key_(seed) {}

    double uniform() { return uniform01(key_, next(), 0, 0, 0x75f17d6bu); }

    double normal() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        auto p = normal_pair(key_, next(), 0, 0, 0xcafef00du);
        spare_ = p.z1;
        have_ = true;
        return p.z0;
    }

    std::uint64_t next_u64() {
        auto b = philox::philox4x32(key_, next(), 0, 0, 0x9e3779b9u);
        return (static_cast<std::uint64_t>(b.x[0]) << 32) | b.x[1];
    }

private:
    std::uint32_t next() { return counter_++; }
    std::uint64_t key_;
    std::uint32_t counter_ = 0;
    double spare_ = 0.0;
    bool have_ = false;
};

}  // namespace turbdiff
