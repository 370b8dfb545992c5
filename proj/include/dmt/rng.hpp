#pragma once

#include <cstdint>
#include <vector>

namespace dmt::rng {

// Counter-based generator: every variate is a pure function of
// (seed, stream_id, index). Streams are independent substreams keyed by a
// splitmix64-style hash of (seed, stream_id); the index walks a fixed-increment
// splitmix64 sequence from that key. Normal variates apply the AS241 inverse
// normal CDF to a 53-bit uniform. This scheme is part of the library contract
// and must not change between releases: identical inputs give bit-identical
// output on any platform with IEEE-754 doubles.

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Substream key for (seed, stream_id). Two rounds of mixing keep distinct
// streams decorrelated even for adjacent seeds/ids.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t h = mix64(seed + kGamma);
    h = mix64(h ^ mix64(stream_id + 0xD1B54A32D192ED03ull));
    return h;
}

// i-th 64-bit output of the substream identified by `key`.
inline std::uint64_t bits_at(std::uint64_t key, std::uint64_t index) {
    return mix64(key + (index + 1) * kGamma);
}

// Uniform on the open interval (0,1); never returns an endpoint.
inline double uniform_at(std::uint64_t key, std::uint64_t index) {
    return (static_cast<double>(bits_at(key, index) >> 11) + 0.5) * 0x1.0p-53;
}

// Inverse of the standard normal CDF (Wichura's AS241, PPND16 variant),
// accurate to ~1e-16 relative over the full open unit interval.
double inverse_normal_cdf(double p);

// Standard normal variate at (key, index).
inline double normal_at(std::uint64_t key, std::uint64_t index) {
    return inverse_normal_cdf(uniform_at(key, index));
}

// Rademacher sign (+1/-1) at (key, index).
inline double rademacher_at(std::uint64_t key, std::uint64_t index) {
    return (bits_at(key, index) >> 63) ? 1.0 : -1.0;
}

// Standard normal CDF, for test statistics built on top of the streams.
double normal_cdf(double z);

}  // namespace dmt::rng
